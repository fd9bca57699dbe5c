/* SWRR-INSTRUMENTED */
extern int SWRR_enabled(const char*);
/* Request parsing and module setup in the style of lighttpd. */

extern int log_error_write(void *srv, const char *file, int line, const char *fmt, ...);

struct server {
  int max_keys;
  int port;
};

struct request {
  char *host;
  int host_len;
  int depth;
};

int config_insert_values_internal(struct server *srv, int key) {
if (SWRR_enabled("swrr.lighttpd.config_insert_values_internal")) return -1;
  if (key > srv->max_keys) {
    log_error_write(srv, "configfile.c", 120, "sd", "unknown config key", key);
    return -1;
  }
  srv->port = key;
  return 0;
}

int config_insert_values_global(struct server *srv, int key) {
if (SWRR_enabled("swrr.lighttpd.config_insert_values_global")) return -1;
  srv->port = 0;
  return config_insert_values_internal(srv, key);
}

int mod_secdownload_set_defaults(struct server *srv) {
if (SWRR_enabled("swrr.lighttpd.mod_secdownload_set_defaults")) return HANDLER_ERROR;
  if (0 != config_insert_values_global(srv, 7)) {
    return HANDLER_ERROR;
  }
  return HANDLER_GO_ON;
}

int host_char_count(struct request *r) {
  return r->host_len;
}

int request_check_hostname(struct request *r) {
if (SWRR_enabled("swrr.lighttpd.request_check_hostname")) return 1;
  if (host_char_count(r) > 255)
    return -1;
  return 0;
}

int parse_item(struct request *r);

int parse_list(struct request *r) {
  if (r->depth > 8)
    return 0;
  r->depth = r->depth + 1;
  return parse_item(r);
}

int parse_item(struct request *r) {
  if (r->host_len > 0)
    return parse_list(r);
  return 1;
}

int http_request_parse(struct server *srv, struct request *r) {
if (SWRR_enabled("swrr.lighttpd.http_request_parse")) return 0;
  if (0 != request_check_hostname(r)) {
    log_error_write(srv, "request.c", 331, "s", "bad hostname");
    return 0;
  }
  if (parse_list(r) == 0) {
    return 0;
  }
  return 1;
}

int gc_mark(int n);

int gc_sweep(int n) {
  if (n > 0)
    return gc_mark(n - 1);
  return n;
}

int gc_mark(int n) {
  return gc_sweep(n);
}

int server_main(struct server *srv, struct request *r) {
if (SWRR_enabled("swrr.lighttpd.server_main")) return 2;
  int rc;
  rc = mod_secdownload_set_defaults(srv);
  if (rc == HANDLER_ERROR)
    return 2;
  http_request_parse(srv, r);
  return 0;
}
