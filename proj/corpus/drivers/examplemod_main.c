/* cflags: -DAPLOG_MARK=0 -DAPLOG_ERR=3 -DAPR_SUCCESS=0 -DAPR_ENOENT=2 -DAPR_EBADF=9 -DAPR_ENOMEM=12 */
#include "harness.h"

struct cfg_file {
  char *name;
  char *buf;
  int lines;
  int fd;
};

struct cfg_file *cfg_alloc(int size);
char *cfg_getline(struct cfg_file *cfg);
int cfg_read_all(struct cfg_file *cfg);
void cfg_reset(struct cfg_file *cfg);
void cfg_close(struct cfg_file *cfg);
int cfg_stat(const char *path);
int pcfg_openfile(struct cfg_file **ret, const char *name);
int config_main(const char *path);

void ap_log_error(int mark, int level, int status, void *server, const char *fmt, ...) {
  (void)mark;
  (void)status;
  (void)server;
  printf("log[%d]: %s\n", level, fmt);
}

void *heap_get(int size) {
  static struct cfg_file pool[4];
  printf("MARKER heap_get %d\n", size);
  memset(pool, 0, sizeof pool);
  return pool;
}

int os_stat(const char *path) {
  printf("MARKER os_stat %s\n", path);
  return (int)strlen(path) - 8;
}

/* arg 0: no file name; otherwise a name of `arg` characters. */
static const char *path_for(int arg) {
  static char buf[64];
  if (arg <= 0)
    return NULL;
  if (arg > 60)
    arg = 60;
  memset(buf, 'p', (size_t)arg);
  buf[arg] = '\0';
  return buf;
}

static int dispatch(const char *name, int arg) {
  struct cfg_file cfg = {"test.conf", NULL, 0, 3};
  struct cfg_file *opened = NULL;
  char line[] = "Listen 80";
  if (arg > 1)
    cfg.buf = line;
  if (strcmp(name, "cfg_alloc") == 0) {
    print_ptr(name, cfg_alloc(arg));
  } else if (strcmp(name, "cfg_getline") == 0) {
    print_ptr(name, cfg_getline(&cfg));
  } else if (strcmp(name, "cfg_read_all") == 0) {
    print_int(name, cfg_read_all(&cfg));
  } else if (strcmp(name, "cfg_reset") == 0) {
    cfg_reset(&cfg);
    printf("%s -> void fd=%d\n", name, cfg.fd);
  } else if (strcmp(name, "cfg_close") == 0) {
    cfg_close(arg ? &cfg : NULL);
    printf("%s -> void fd=%d\n", name, cfg.fd);
  } else if (strcmp(name, "cfg_stat") == 0) {
    print_int(name, cfg_stat(path_for(arg)));
  } else if (strcmp(name, "pcfg_openfile") == 0) {
    print_int(name, pcfg_openfile(&opened, path_for(arg)));
  } else if (strcmp(name, "config_main") == 0) {
    print_int(name, config_main(path_for(arg)));
  } else {
    return 0;
  }
  return 1;
}
