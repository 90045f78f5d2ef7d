#pragma once

#include <cstdint>

namespace dpvla::flops {

// One convention per kernel, shared by the runtime meter and the closed-form
// cost model. The cost model enumerates kernel calls analytically; the meter
// accumulates the same formulas at call time, so the two paths cross-check
// the enumeration, not the constants.

inline uint64_t matmul(int64_t m, int64_t k, int64_t n) {
  return 2ull * uint64_t(m) * uint64_t(k) * uint64_t(n);
}

inline uint64_t bias_rows(int64_t rows, int64_t cols) {
  return uint64_t(rows) * uint64_t(cols);
}

inline uint64_t elemwise(int64_t n) { return uint64_t(n); }

inline uint64_t gelu(int64_t n) { return 14ull * uint64_t(n); }

inline uint64_t tanh_act(int64_t n) { return 9ull * uint64_t(n); }

// max-scan, subtract, exp, sum, divide
inline uint64_t softmax_row(int64_t w) { return 12ull * uint64_t(w); }

// mean, variance, normalize, affine
inline uint64_t layernorm_row(int64_t d) { return 10ull * uint64_t(d); }

// scores (dot + scale), softmax, weighted sum; row t of a causal map attends
// t+1 keys, a dense map attends all T.
inline uint64_t attention_row(int64_t keys, int64_t d) {
  return uint64_t(keys) * (2ull * uint64_t(d) + 1ull) + softmax_row(keys) +
         2ull * uint64_t(keys) * uint64_t(d);
}

inline uint64_t attention(int64_t b, int64_t t, int64_t d, bool causal) {
  uint64_t per_seq = 0;
  for (int64_t row = 0; row < t; ++row) {
    per_seq += attention_row(causal ? row + 1 : t, d);
  }
  return uint64_t(b) * per_seq;
}

// logsumexp + pick, per row of width c
inline uint64_t cross_entropy_row(int64_t c) { return 13ull * uint64_t(c); }

// Thread-local forward-flop counter. Training code never reads it; the
// runtime meters inference calls by taking deltas around them.
struct Meter {
  static uint64_t read();
  static void add(uint64_t f);
  static void reset();
};

}  // namespace dpvla::flops
