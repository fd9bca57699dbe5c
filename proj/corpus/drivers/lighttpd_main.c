/* cflags: -DHANDLER_GO_ON=0 -DHANDLER_ERROR=5 */
#include "harness.h"

struct server {
  int max_keys;
  int port;
};

struct request {
  char *host;
  int host_len;
  int depth;
};

int config_insert_values_internal(struct server *srv, int key);
int config_insert_values_global(struct server *srv, int key);
int mod_secdownload_set_defaults(struct server *srv);
int host_char_count(struct request *r);
int request_check_hostname(struct request *r);
int parse_list(struct request *r);
int parse_item(struct request *r);
int http_request_parse(struct server *srv, struct request *r);
int gc_sweep(int n);
int gc_mark(int n);
int server_main(struct server *srv, struct request *r);

int log_error_write(void *srv, const char *file, int line, const char *fmt, ...) {
  (void)srv;
  printf("log: %s:%d %s\n", file, line, fmt);
  return 0;
}

/* The server accepts keys up to 10; `arg` is the key, the server's key
 * limit for set_defaults and server_main, or the host length. */
static int dispatch(const char *name, int arg) {
  struct server srv = {10, 80};
  struct request r = {"example.org", arg, 0};
  if (strcmp(name, "config_insert_values_internal") == 0) {
    print_int(name, config_insert_values_internal(&srv, arg));
  } else if (strcmp(name, "config_insert_values_global") == 0) {
    print_int(name, config_insert_values_global(&srv, arg));
  } else if (strcmp(name, "mod_secdownload_set_defaults") == 0) {
    srv.max_keys = arg;
    print_int(name, mod_secdownload_set_defaults(&srv));
  } else if (strcmp(name, "host_char_count") == 0) {
    print_int(name, host_char_count(&r));
  } else if (strcmp(name, "request_check_hostname") == 0) {
    print_int(name, request_check_hostname(&r));
  } else if (strcmp(name, "parse_list") == 0) {
    print_int(name, parse_list(&r));
    printf("depth %d\n", r.depth);
  } else if (strcmp(name, "parse_item") == 0) {
    print_int(name, parse_item(&r));
    printf("depth %d\n", r.depth);
  } else if (strcmp(name, "http_request_parse") == 0) {
    print_int(name, http_request_parse(&srv, &r));
  } else if (strcmp(name, "gc_sweep") == 0) {
    print_int(name, gc_sweep(arg));
  } else if (strcmp(name, "gc_mark") == 0) {
    print_int(name, gc_mark(arg));
  } else if (strcmp(name, "server_main") == 0) {
    srv.max_keys = arg;
    r.host_len = arg * 30;
    print_int(name, server_main(&srv, &r));
  } else {
    return 0;
  }
  return 1;
}
