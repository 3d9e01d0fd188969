#include "qopt/matrix.hpp"

#include <stdexcept>

namespace qopt {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// out (+)= a * b, ikj order so the inner loop runs over contiguous rows.
void mul_impl(const Matrix& a, const Matrix& b, Matrix& out, bool accumulate) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    if (!accumulate || out.rows() != a.rows() || out.cols() != b.cols()) {
        out.resize(a.rows(), b.cols());
    }
    const int n = a.rows();
    const int k = a.cols();
    const int m = b.cols();
    for (int i = 0; i < n; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (int t = 0; t < k; ++t) {
            const double av = arow[t];
            if (av == 0.0) continue;
            const double* brow = b.row(t);
            for (int j = 0; j < m; ++j) {
                orow[j] += av * brow[j];
            }
        }
    }
}

void mul_a_bt_impl(const Matrix& a, const Matrix& b, Matrix& out, bool accumulate) {
    require(a.cols() == b.cols(), "matmul_a_bt: inner dimensions differ");
    if (!accumulate || out.rows() != a.rows() || out.cols() != b.rows()) {
        out.resize(a.rows(), b.rows());
    }
    const int n = a.rows();
    const int k = a.cols();
    const int m = b.rows();
    for (int i = 0; i < n; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (int j = 0; j < m; ++j) {
            const double* brow = b.row(j);
            double acc = 0.0;
            for (int t = 0; t < k; ++t) {
                acc += arow[t] * brow[t];
            }
            orow[j] += acc;
        }
    }
}

} // namespace

void matmul(const Matrix& a, const Matrix& b, Matrix& out) { mul_impl(a, b, out, false); }

void matmul_add(const Matrix& a, const Matrix& b, Matrix& out) {
    require(out.rows() == a.rows() && out.cols() == b.cols(), "matmul_add: output shape mismatch");
    mul_impl(a, b, out, true);
}

void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
    require(a.rows() == b.rows(), "matmul_at_b: inner dimensions differ");
    out.resize(a.cols(), b.cols());
    const int n = a.rows();
    const int k = a.cols();
    const int m = b.cols();
    // Rank-1 accumulation per input row; inner loop contiguous in out.
    for (int t = 0; t < n; ++t) {
        const double* arow = a.row(t);
        const double* brow = b.row(t);
        for (int i = 0; i < k; ++i) {
            const double av = arow[i];
            if (av == 0.0) continue;
            double* orow = out.row(i);
            for (int j = 0; j < m; ++j) {
                orow[j] += av * brow[j];
            }
        }
    }
}

void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out) { mul_a_bt_impl(a, b, out, false); }

void matmul_a_bt_add(const Matrix& a, const Matrix& b, Matrix& out) {
    require(out.rows() == a.rows() && out.cols() == b.rows(), "matmul_a_bt_add: output shape mismatch");
    mul_a_bt_impl(a, b, out, true);
}

} // namespace qopt
