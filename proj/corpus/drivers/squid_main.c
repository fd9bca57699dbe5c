/* cflags: -DDISK_BUSY=1 -DSTORE_EBUSY=16 -DSTORE_OK=0 -DSTORE_ENOSPC=28 */
#include "harness.h"

extern int disk_state;

char *buf_alloc(int n);
char *buf_grow(int n);
int disk_ready(void);
int store_open(const char *path);
int store_write(const char *path);
int store_sync(const char *path);
int store_check(int x);
int store_flag(int x);
int log_startup(void);
int warn_once(int x);
int cache_lookup(int key);
char *cache_name(int key);
int cache_print(int key);

void log_msg(const char *fmt, ...) { printf("log: %s\n", fmt); }

void *heap_get(int size) {
  static char pool[16384];
  printf("MARKER heap_get %d\n", size);
  return size > 0 && size <= (int)sizeof pool ? pool : NULL;
}

static int dispatch(const char *name, int arg) {
  const char *path = "cache/swap.state";
  if (strcmp(name, "disk") == 0) {
    disk_state = arg;
    print_int(name, arg);
  } else if (strcmp(name, "buf_alloc") == 0) {
    print_ptr(name, buf_alloc(arg));
  } else if (strcmp(name, "buf_grow") == 0) {
    print_ptr(name, buf_grow(arg));
  } else if (strcmp(name, "disk_ready") == 0) {
    print_int(name, disk_ready());
  } else if (strcmp(name, "store_open") == 0) {
    print_int(name, store_open(path));
  } else if (strcmp(name, "store_write") == 0) {
    print_int(name, store_write(path));
  } else if (strcmp(name, "store_sync") == 0) {
    print_int(name, store_sync(path));
  } else if (strcmp(name, "store_check") == 0) {
    print_int(name, store_check(arg));
  } else if (strcmp(name, "store_flag") == 0) {
    print_int(name, store_flag(arg));
  } else if (strcmp(name, "log_startup") == 0) {
    print_int(name, log_startup());
  } else if (strcmp(name, "warn_once") == 0) {
    print_int(name, warn_once(arg));
  } else if (strcmp(name, "cache_lookup") == 0) {
    print_int(name, cache_lookup(arg));
  } else if (strcmp(name, "cache_name") == 0) {
    print_ptr(name, cache_name(arg));
  } else if (strcmp(name, "cache_print") == 0) {
    print_int(name, cache_print(arg));
  } else {
    return 0;
  }
  return 1;
}
