/* cflags: */
#include "harness.h"

struct module {
  int (*handle)(int arg);
  int (*init)(int flags);
  int loaded;
};

extern struct module cgi_module;

int cgi_handle(int arg);
int cgi_init(int flags);
int proxy_handle(int arg);
int proxy_init(int flags);
void proxy_setup(struct module *m);
int module_dispatch(struct module *m, int arg);
int module_init(struct module *m);
int status_cb(int code);
void status_install(void);
int status_report(int code);

void log_msg(const char *fmt, ...) { printf("log: %s\n", fmt); }

void register_callback(void *cb) { printf("MARKER register_callback %s\n", cb ? "set" : "null"); }

/* For module_dispatch and module_init, an odd `arg` selects a module set up
 * by proxy_setup and an even one a copy of cgi_module; module_dispatch loads
 * the cgi copy when `arg` exceeds 10. */
static int dispatch(const char *name, int arg) {
  struct module m = cgi_module;
  if (arg % 2 != 0)
    proxy_setup(&m);
  else if (arg > 10)
    m.loaded = 1;
  if (strcmp(name, "cgi_handle") == 0) {
    print_int(name, cgi_handle(arg));
  } else if (strcmp(name, "cgi_init") == 0) {
    print_int(name, cgi_init(arg));
  } else if (strcmp(name, "proxy_handle") == 0) {
    print_int(name, proxy_handle(arg));
  } else if (strcmp(name, "proxy_init") == 0) {
    print_int(name, proxy_init(arg));
  } else if (strcmp(name, "proxy_setup") == 0) {
    print_void(name);
  } else if (strcmp(name, "module_dispatch") == 0) {
    print_int(name, module_dispatch(&m, arg));
  } else if (strcmp(name, "module_init") == 0) {
    print_int(name, module_init(&m));
  } else if (strcmp(name, "status_cb") == 0) {
    print_int(name, status_cb(arg));
  } else if (strcmp(name, "status_install") == 0) {
    status_install();
    print_void(name);
  } else if (strcmp(name, "status_report") == 0) {
    print_int(name, status_report(arg));
  } else {
    return 0;
  }
  return 1;
}
