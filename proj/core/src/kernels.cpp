#include "dpvla/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "dpvla/flops.hpp"

namespace dpvla::flops {

namespace {
thread_local uint64_t g_flops = 0;
}

uint64_t Meter::read() { return g_flops; }
void Meter::add(uint64_t f) { g_flops += f; }
void Meter::reset() { g_flops = 0; }

}  // namespace dpvla::flops

namespace dpvla::kern {

namespace {
constexpr double kSqrt2OverPi = 0.7978845608028653558798921198687;
constexpr double kGeluCubic = 0.044715;
}  // namespace

void matmul(const double* a, const double* b, double* y, int64_t m, int64_t k, int64_t n) {
  std::memset(y, 0, sizeof(double) * size_t(m) * size_t(n));
  matmul_acc(a, b, y, m, k, n);
}

void matmul_acc(const double* a, const double* b, double* y, int64_t m, int64_t k, int64_t n) {
  flops::Meter::add(flops::matmul(m, k, n));
  for (int64_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    double* yi = y + i * n;
    for (int64_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b + p * n;
      for (int64_t j = 0; j < n; ++j) yi[j] += aip * bp[j];
    }
  }
}

void matmul_at_b_acc(const double* a, const double* dy, double* y, int64_t m, int64_t k, int64_t n) {
  // y[K,N] += sum_i a[i,K]^T dy[i,N]
  for (int64_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    const double* di = dy + i * n;
    for (int64_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      double* yp = y + p * n;
      for (int64_t j = 0; j < n; ++j) yp[j] += aip * di[j];
    }
  }
}

void matmul_a_bt_acc(const double* dy, const double* b, double* y, int64_t m, int64_t k, int64_t n) {
  // y[M,K] += dy[M,N] * b[K,N]^T
  for (int64_t i = 0; i < m; ++i) {
    const double* di = dy + i * n;
    double* yi = y + i * k;
    for (int64_t p = 0; p < k; ++p) {
      const double* bp = b + p * n;
      double acc = 0.0;
      for (int64_t j = 0; j < n; ++j) acc += di[j] * bp[j];
      yi[p] += acc;
    }
  }
}

void add_bias_rows(double* y, const double* bias, int64_t rows, int64_t cols) {
  flops::Meter::add(flops::bias_rows(rows, cols));
  for (int64_t i = 0; i < rows; ++i) {
    double* yi = y + i * cols;
    for (int64_t j = 0; j < cols; ++j) yi[j] += bias[j];
  }
}

void colsum_acc(const double* dy, double* db, int64_t rows, int64_t cols) {
  for (int64_t i = 0; i < rows; ++i) {
    const double* di = dy + i * cols;
    for (int64_t j = 0; j < cols; ++j) db[j] += di[j];
  }
}

void gelu_forward(const double* x, double* y, int64_t n) {
  flops::Meter::add(flops::gelu(n));
  for (int64_t i = 0; i < n; ++i) {
    double v = x[i];
    double c = kSqrt2OverPi * (v + kGeluCubic * v * v * v);
    y[i] = 0.5 * v * (1.0 + std::tanh(c));
  }
}

void gelu_backward(const double* x, const double* dy, double* dx_acc, int64_t n) {
  for (int64_t i = 0; i < n; ++i) {
    double v = x[i];
    double c = kSqrt2OverPi * (v + kGeluCubic * v * v * v);
    double t = std::tanh(c);
    double dc = kSqrt2OverPi * (1.0 + 3.0 * kGeluCubic * v * v);
    double grad = 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * dc;
    dx_acc[i] += dy[i] * grad;
  }
}

void tanh_forward(const double* x, double* y, int64_t n) {
  flops::Meter::add(flops::tanh_act(n));
  for (int64_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
}

void tanh_backward(const double* y, const double* dy, double* dx_acc, int64_t n) {
  for (int64_t i = 0; i < n; ++i) dx_acc[i] += dy[i] * (1.0 - y[i] * y[i]);
}

void layernorm_forward(const double* x, const double* gamma, const double* beta,
                       double* y, double* mean, double* rstd, int64_t rows,
                       int64_t d, double eps) {
  flops::Meter::add(uint64_t(rows) * flops::layernorm_row(d));
  for (int64_t i = 0; i < rows; ++i) {
    const double* xi = x + i * d;
    double* yi = y + i * d;
    double mu = 0.0;
    for (int64_t j = 0; j < d; ++j) mu += xi[j];
    mu /= double(d);
    double var = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      double c = xi[j] - mu;
      var += c * c;
    }
    var /= double(d);
    double rs = 1.0 / std::sqrt(var + eps);
    mean[i] = mu;
    rstd[i] = rs;
    for (int64_t j = 0; j < d; ++j) yi[j] = (xi[j] - mu) * rs * gamma[j] + beta[j];
  }
}

void layernorm_backward(const double* x, const double* gamma, const double* mean,
                        const double* rstd, const double* dy, double* dx_acc,
                        double* dgamma_acc, double* dbeta_acc, int64_t rows, int64_t d) {
  for (int64_t i = 0; i < rows; ++i) {
    const double* xi = x + i * d;
    const double* di = dy + i * d;
    double* dxi = dx_acc + i * d;
    double mu = mean[i];
    double rs = rstd[i];
    double sum_dg = 0.0;
    double sum_dgx = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      double xhat = (xi[j] - mu) * rs;
      double g = di[j] * gamma[j];
      sum_dg += g;
      sum_dgx += g * xhat;
      dgamma_acc[j] += di[j] * xhat;
      dbeta_acc[j] += di[j];
    }
    double inv_d = 1.0 / double(d);
    for (int64_t j = 0; j < d; ++j) {
      double xhat = (xi[j] - mu) * rs;
      double g = di[j] * gamma[j];
      dxi[j] += rs * (g - inv_d * sum_dg - xhat * inv_d * sum_dgx);
    }
  }
}

void softmax_row(const double* x, double* y, int64_t w) {
  flops::Meter::add(flops::softmax_row(w));
  double mx = -std::numeric_limits<double>::infinity();
  for (int64_t j = 0; j < w; ++j) mx = std::max(mx, x[j]);
  double sum = 0.0;
  for (int64_t j = 0; j < w; ++j) {
    double e = std::exp(x[j] - mx);
    y[j] = e;
    sum += e;
  }
  double inv = 1.0 / sum;
  for (int64_t j = 0; j < w; ++j) y[j] *= inv;
}

void attention_forward(const double* q, const double* k, const double* v,
                       double* y, double* weights, int64_t b, int64_t t,
                       int64_t d, bool causal) {
  const double scale = 1.0 / std::sqrt(double(d));
  std::memset(weights, 0, sizeof(double) * size_t(b) * size_t(t) * size_t(t));
  for (int64_t s = 0; s < b; ++s) {
    const double* qs = q + s * t * d;
    const double* ks = k + s * t * d;
    const double* vs = v + s * t * d;
    double* ys = y + s * t * d;
    double* ws = weights + s * t * t;
    for (int64_t row = 0; row < t; ++row) {
      const int64_t keys = causal ? row + 1 : t;
      flops::Meter::add(flops::attention_row(keys, d));
      const double* qr = qs + row * d;
      double* wr = ws + row * t;
      double mx = -std::numeric_limits<double>::infinity();
      for (int64_t j = 0; j < keys; ++j) {
        const double* kj = ks + j * d;
        double dot = 0.0;
        for (int64_t c = 0; c < d; ++c) dot += qr[c] * kj[c];
        wr[j] = dot * scale;
        mx = std::max(mx, wr[j]);
      }
      double sum = 0.0;
      for (int64_t j = 0; j < keys; ++j) {
        double e = std::exp(wr[j] - mx);
        wr[j] = e;
        sum += e;
      }
      double inv = 1.0 / sum;
      double* yr = ys + row * d;
      for (int64_t c = 0; c < d; ++c) yr[c] = 0.0;
      for (int64_t j = 0; j < keys; ++j) {
        wr[j] *= inv;
        const double wj = wr[j];
        const double* vj = vs + j * d;
        for (int64_t c = 0; c < d; ++c) yr[c] += wj * vj[c];
      }
    }
  }
}

void attention_backward(const double* q, const double* k, const double* v,
                        const double* weights, const double* dy, double* dq_acc,
                        double* dk_acc, double* dv_acc, int64_t b, int64_t t,
                        int64_t d, bool causal) {
  const double scale = 1.0 / std::sqrt(double(d));
  std::vector<double> dw(size_t(t));
  for (int64_t s = 0; s < b; ++s) {
    const double* qs = q + s * t * d;
    const double* ks = k + s * t * d;
    const double* vs = v + s * t * d;
    const double* ws = weights + s * t * t;
    const double* dys = dy + s * t * d;
    double* dqs = dq_acc + s * t * d;
    double* dks = dk_acc + s * t * d;
    double* dvs = dv_acc + s * t * d;
    for (int64_t row = 0; row < t; ++row) {
      const int64_t keys = causal ? row + 1 : t;
      const double* wr = ws + row * t;
      const double* dyr = dys + row * d;
      // dV and dW
      double dot_wd = 0.0;
      for (int64_t j = 0; j < keys; ++j) {
        const double* vj = vs + j * d;
        double* dvj = dvs + j * d;
        double g = 0.0;
        for (int64_t c = 0; c < d; ++c) {
          g += dyr[c] * vj[c];
          dvj[c] += wr[j] * dyr[c];
        }
        dw[size_t(j)] = g;
        dot_wd += wr[j] * g;
      }
      // softmax backward, then scores -> q,k
      const double* qr = qs + row * d;
      double* dqr = dqs + row * d;
      for (int64_t j = 0; j < keys; ++j) {
        double dscore = wr[j] * (dw[size_t(j)] - dot_wd) * scale;
        const double* kj = ks + j * d;
        double* dkj = dks + j * d;
        for (int64_t c = 0; c < d; ++c) {
          dqr[c] += dscore * kj[c];
          dkj[c] += dscore * qr[c];
        }
      }
    }
  }
}

double cross_entropy_forward(const double* logits, const int32_t* targets,
                             int64_t rows, int64_t c) {
  flops::Meter::add(uint64_t(rows) * flops::cross_entropy_row(c));
  double total = 0.0;
  for (int64_t i = 0; i < rows; ++i) {
    const double* li = logits + i * c;
    double mx = -std::numeric_limits<double>::infinity();
    for (int64_t j = 0; j < c; ++j) mx = std::max(mx, li[j]);
    double sum = 0.0;
    for (int64_t j = 0; j < c; ++j) sum += std::exp(li[j] - mx);
    total += mx + std::log(sum) - li[targets[i]];
  }
  return total / double(rows);
}

void cross_entropy_backward(const double* logits, const int32_t* targets,
                            double dloss, double* dlogits_acc, int64_t rows, int64_t c) {
  const double inv_rows = dloss / double(rows);
  for (int64_t i = 0; i < rows; ++i) {
    const double* li = logits + i * c;
    double* di = dlogits_acc + i * c;
    double mx = -std::numeric_limits<double>::infinity();
    for (int64_t j = 0; j < c; ++j) mx = std::max(mx, li[j]);
    double sum = 0.0;
    for (int64_t j = 0; j < c; ++j) sum += std::exp(li[j] - mx);
    double inv = 1.0 / sum;
    for (int64_t j = 0; j < c; ++j) di[j] += std::exp(li[j] - mx) * inv * inv_rows;
    di[targets[i]] -= inv_rows;
  }
}

}  // namespace dpvla::kern
