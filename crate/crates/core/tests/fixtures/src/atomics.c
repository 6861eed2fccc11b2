#include <stdatomic.h>

_Atomic int shared_counter;

int atomic_bump(void) { return atomic_fetch_add(&shared_counter, 1); }

int atomic_swap_if(int expected, int desired) {
  return atomic_compare_exchange_strong(&shared_counter, &expected, desired);
}

void full_fence(void) { atomic_thread_fence(memory_order_seq_cst); }

typedef float v4f __attribute__((vector_size(16)));

v4f vadd(v4f a, v4f b) { return a + b; }

float vfirst(v4f a) { return a[0]; }

v4f vset(v4f a, float x) {
  a[2] = x;
  return a;
}

struct pair { int a; long b; };

struct pair make_pair(int a, long b) {
  struct pair p = {a, b};
  return p;
}

_Noreturn void die(void) { __builtin_unreachable(); }

int maybe_die(int x) {
  if (x < 0)
    die();
  return x * 2;
}

int select_max(int a, int b) { return a > b ? a : b; }

unsigned long wide_mul(unsigned a, unsigned b) { return (unsigned long)a * b; }
