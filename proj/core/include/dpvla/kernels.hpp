#pragma once

#include <cstdint>

namespace dpvla::kern {

// Raw numeric kernels. Forward kernels add to flops::Meter; backward kernels
// do not (the meter models inference cost).

// y[M,N] = a[M,K] * b[K,N]
void matmul(const double* a, const double* b, double* y, int64_t m, int64_t k, int64_t n);
// y[M,N] += a[M,K] * b[K,N]
void matmul_acc(const double* a, const double* b, double* y, int64_t m, int64_t k, int64_t n);
// y[K,N] += a[M,K]^T * dy[M,N]
void matmul_at_b_acc(const double* a, const double* dy, double* y, int64_t m, int64_t k, int64_t n);
// y[M,K] += dy[M,N] * b[K,N]^T
void matmul_a_bt_acc(const double* dy, const double* b, double* y, int64_t m, int64_t k, int64_t n);

void add_bias_rows(double* y, const double* bias, int64_t rows, int64_t cols);
void colsum_acc(const double* dy, double* db, int64_t rows, int64_t cols);

void gelu_forward(const double* x, double* y, int64_t n);
void gelu_backward(const double* x, const double* dy, double* dx_acc, int64_t n);
void tanh_forward(const double* x, double* y, int64_t n);
void tanh_backward(const double* y, const double* dy, double* dx_acc, int64_t n);

// Row-wise layernorm over the last axis; caches mean and reciprocal stddev.
void layernorm_forward(const double* x, const double* gamma, const double* beta,
                       double* y, double* mean, double* rstd, int64_t rows,
                       int64_t d, double eps);
void layernorm_backward(const double* x, const double* gamma, const double* mean,
                        const double* rstd, const double* dy, double* dx_acc,
                        double* dgamma_acc, double* dbeta_acc, int64_t rows, int64_t d);

// Scaled dot-product attention over [B,T,D] with optional causal mask.
// weights is a caller-owned [B,T,T] buffer of attention rows (softmaxed).
void attention_forward(const double* q, const double* k, const double* v,
                       double* y, double* weights, int64_t b, int64_t t,
                       int64_t d, bool causal);
void attention_backward(const double* q, const double* k, const double* v,
                        const double* weights, const double* dy, double* dq_acc,
                        double* dk_acc, double* dv_acc, int64_t b, int64_t t,
                        int64_t d, bool causal);

// Stable softmax of one row of width w into y; returns nothing, meters w.
void softmax_row(const double* x, double* y, int64_t w);

// loss = mean over rows of (logsumexp(row) - row[target]); dlogits filled by
// backward with (softmax - onehot)/rows scaled by dloss.
double cross_entropy_forward(const double* logits, const int32_t* targets,
                             int64_t rows, int64_t c);
void cross_entropy_backward(const double* logits, const int32_t* targets,
                            double dloss, double* dlogits_acc, int64_t rows, int64_t c);

}  // namespace dpvla::kern
