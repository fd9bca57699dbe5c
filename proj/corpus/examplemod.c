/* Config file handling modelled on the Apache pcfg routines. */

extern void ap_log_error(int mark, int level, int status, void *server, const char *fmt, ...);
extern void *heap_get(int size);
extern int os_stat(const char *path);

struct cfg_file {
  char *name;
  char *buf;
  int lines;
  int fd;
};

struct cfg_file *cfg_alloc(int size) {
  struct cfg_file *cfg;
  if (size <= 0)
    return NULL;
  cfg = heap_get(size);
  return cfg;
}

char *cfg_getline(struct cfg_file *cfg) {
  cfg->lines = cfg->lines + 1;
  return cfg->buf;
}

int cfg_read_all(struct cfg_file *cfg) {
  char *line;
  line = cfg_getline(cfg);
  if (line == NULL) {
    return -2;
  }
  return 0;
}

void cfg_reset(struct cfg_file *cfg) {
  cfg->lines = 0;
  cfg->fd = -1;
}

void cfg_close(struct cfg_file *cfg) {
  if (cfg == NULL) {
    ap_log_error(APLOG_MARK, APLOG_ERR, 0, NULL, "cfg_close() called with NULL");
    return;
  }
  cfg_reset(cfg);
}

int cfg_stat(const char *path) {
  return os_stat(path);
}

int pcfg_openfile(struct cfg_file **ret, const char *name) {
  struct cfg_file *cfg;
  if (name == NULL) {
    /* Apache's error logging function */
    ap_log_error(APLOG_MARK, APLOG_ERR, 0, NULL, "Internal error: pcfg_openfile() called with NULL filename");
    return APR_EBADF; /* indicates to caller that error occured */
  }
  if (cfg_stat(name) < 0)
    return APR_ENOENT;
  cfg = cfg_alloc(64);
  if (cfg == NULL)
    return APR_ENOMEM;
  *ret = cfg;
  return APR_SUCCESS;
}

int config_main(const char *path) {
  struct cfg_file *cfg;
  int rc;
  rc = pcfg_openfile(&cfg, path);
  if (rc != APR_SUCCESS)
    return rc;
  rc = cfg_read_all(cfg);
  cfg_close(cfg);
  if (cfg_stat(path) > 0)
    return 1;
  return rc;
}
