/* A hot function for the overhead benchmark: one SWRR check per call. */

extern void log_msg(const char *fmt, ...);

int hot_sum(int n) {
  int acc;
  int i;
  if (n < 0) {
    log_msg("negative length");
    return -1;
  }
  acc = 0;
  i = 0;
  while (i < n) {
    acc = acc * 3 + i;
    if (acc > 100000)
      acc = acc - 99991;
    i = i + 1;
  }
  return acc;
}
