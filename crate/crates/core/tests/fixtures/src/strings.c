#include <stddef.h>

static const char greeting[] = "hello, world";
const char *names[] = {"alpha", "beta", "gamma", "delta"};
char scratch[64];
int lookup_table[5] = {1, 1, 2, 3, 5};

size_t my_strlen(const char *s) {
  size_t n = 0;
  while (s[n])
    n++;
  return n;
}

int my_strcmp(const char *a, const char *b) {
  while (*a && *a == *b) {
    a++;
    b++;
  }
  return (unsigned char)*a - (unsigned char)*b;
}

char *my_strcpy(char *dst, const char *src) {
  char *d = dst;
  while ((*d++ = *src++))
    ;
  return dst;
}

void reverse(char *s) {
  size_t n = my_strlen(s);
  for (size_t i = 0; i < n / 2; i++) {
    char t = s[i];
    s[i] = s[n - 1 - i];
    s[n - 1 - i] = t;
  }
}

int count_char(const char *s, char c) {
  int k = 0;
  for (; *s; s++)
    k += (*s == c);
  return k;
}

const char *get_greeting(void) { return greeting; }

const char *name_at(int i) { return (i >= 0 && i < 4) ? names[i] : NULL; }

int to_upper(int c) { return (c >= 'a' && c <= 'z') ? c - 32 : c; }

void upcase(char *s) {
  for (; *s; s++)
    *s = (char)to_upper(*s);
}

int fib_lookup(int i) { return lookup_table[i % 5]; }

char *fill_scratch(char c) {
  for (int i = 0; i < 63; i++)
    scratch[i] = c;
  scratch[63] = 0;
  return scratch;
}

int atoi_simple(const char *s) {
  int sign = 1, v = 0;
  if (*s == '-') {
    sign = -1;
    s++;
  }
  while (*s >= '0' && *s <= '9')
    v = v * 10 + (*s++ - '0');
  return sign * v;
}

unsigned hash_str(const char *s) {
  unsigned h = 5381;
  while (*s)
    h = h * 33 + (unsigned char)*s++;
  return h;
}
