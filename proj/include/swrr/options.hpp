#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace swrr {

/// Lowercased file stem with every non-alphanumeric byte replaced by `_`.
inline std::string sanitized_stem(std::string_view path) {
  const auto slash = path.find_last_of("/\\");
  std::string_view base = slash == std::string_view::npos ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  if (dot != std::string_view::npos && dot != 0)
    base = base.substr(0, dot);
  std::string out;
  out.reserve(base.size());
  for (char c : base) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_');
  }
  return out;
}

/// `swrr.<stem>.<function>`.
inline std::string canonical_option_id(std::string_view file, std::string_view function) {
  std::string id = "swrr.";
  id += sanitized_stem(file);
  id += '.';
  id += function;
  return id;
}

struct OptionRequest {
  std::string file;
  std::string function;
  std::uint32_t offset = 0;
};

/// Canonical ids for a batch of functions. Colliding ids get `.2`, `.3`, ...
/// in (file path, source offset) order; the first keeps the bare id. Result
/// order matches `requests`.
inline std::vector<std::string> assign_option_ids(const std::vector<OptionRequest> &requests) {
  std::vector<std::size_t> order(requests.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &ra = requests[a], &rb = requests[b];
    if (ra.file != rb.file)
      return ra.file < rb.file;
    return ra.offset < rb.offset;
  });
  std::vector<std::string> ids(requests.size());
  std::map<std::string, int> uses;
  for (std::size_t i : order) {
    const std::string base = canonical_option_id(requests[i].file, requests[i].function);
    const int n = ++uses[base];
    ids[i] = n == 1 ? base : base + "." + std::to_string(n);
  }
  return ids;
}

} // namespace swrr
