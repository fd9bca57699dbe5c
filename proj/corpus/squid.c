/* Buffer and cache store helpers. */

extern void log_msg(const char *fmt, ...);
extern void *heap_get(int size);

int disk_state;

char *buf_alloc(int n) {
  if (n > 4096) {
    log_msg("buffer request too large");
    return NULL;
  }
  return heap_get(n);
}

char *buf_grow(int n) {
  return buf_alloc(n * 2);
}

int disk_ready(void) {
  return disk_state;
}

int store_open(const char *path) {
  int tries;
  tries = 0;
  while (tries < 3) {
    if (disk_ready() == DISK_BUSY) {
      log_msg("store busy");
      return STORE_EBUSY;
    }
    tries = tries + 1;
  }
  return STORE_OK;
}

int store_write(const char *path) {
  if (store_open(path) == STORE_EBUSY)
    return -5;
  return 0;
}

int store_sync(const char *path) {
  if (store_open(path) == STORE_ENOSPC)
    return -6;
  return 0;
}

int store_check(int x) {
  return x > 3;
}

int store_flag(int x) {
  if (!store_check(x)) {
    log_msg("flag check failed");
    return -1;
  }
  return 0;
}

int log_startup(void) {
  log_msg("starting");
  return 0;
}

int warn_once(int x) {
  if (x > 10) {
    log_msg("large value");
  }
  return -4;
}

int cache_lookup(int key) {
  int hit;
  hit = 0;
  if (key > 0) {
    log_msg("lookup");
    hit = key;
  }
  return hit;
}

char *cache_name(int key) {
  if (key == 0)
    return "default";
  return heap_get(key);
}

int cache_print(int key) {
  char *name;
  name = cache_name(key);
  if (!name)
    return -7;
  return 0;
}
