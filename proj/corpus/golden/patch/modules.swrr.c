/* Loadable modules dispatched through function-pointer fields. */

extern void log_msg(const char *fmt, ...);
extern void register_callback(void *cb);

struct module {
  int (*handle)(int arg);
  int (*init)(int flags);
  int loaded;
};

int cgi_handle(int arg) {
  if (arg < 0) {
    log_msg("cgi: negative argument");
    return -1;
  }
  return arg + 1;
}

int cgi_init(int flags) {
  return flags + 1;
}

int proxy_handle(int arg) {
  return arg * 2;
}

int proxy_init(int flags) {
  return 0;
}

struct module cgi_module = { cgi_handle, cgi_init, 0 };

void proxy_setup(struct module *m) {
  m->handle = proxy_handle;
  m->init = &proxy_init;
  m->loaded = 1;
}

int module_dispatch(struct module *m, int arg) {
  if (m->loaded == 0) {
    log_msg("dispatch to unloaded module");
    return -3;
  }
  return m->handle(arg);
}

int module_init(struct module *m) {
  if (m->init(0) != 0) {
    log_msg("module init failed");
    return -1;
  }
  return 0;
}

int status_cb(int code) {
  return code;
}

void status_install(void) {
  register_callback(&status_cb);
}

int status_report(int code) {
  if (code > 500) {
    log_msg("server error");
    return -1;
  }
  return status_cb(code);
}
