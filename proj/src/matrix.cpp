#include "smv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "smv/error.hpp"

namespace smv {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what)
{
    if (!a.same_shape(b)) {
        std::ostringstream msg;
        msg << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
            << "x" << b.cols();
        throw InvalidInput(msg.str());
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data))
{
    if (data_.size() != rows_ * cols_) {
        throw InvalidInput("DenseMatrix: data length does not equal rows*cols");
    }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
{
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw InvalidInput("DenseMatrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n, double scale)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = scale;
    }
    return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const
{
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = (*this)(i, j);
    }
    return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values)
{
    for (std::size_t i = 0; i < rows_; ++i) {
        (*this)(i, j) = values[i];
    }
}

bool DenseMatrix::all_finite() const
{
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix DenseMatrix::transposed() const
{
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other)
{
    require_same_shape(*this, other, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other)
{
    require_same_shape(*this, other, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s)
{
    for (auto& v : data_) {
        v *= s;
    }
    return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw InvalidInput("matmul: inner dimensions differ");
    }
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < ci.size(); ++j) {
                ci[j] += aik * bk[j];
            }
        }
    }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows()) {
        throw InvalidInput("matmul_tn: row counts differ");
    }
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto ak = a.row(k);
        auto bk = b.row(k);
        for (std::size_t i = 0; i < ak.size(); ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            auto ci = c.row(i);
            for (std::size_t j = 0; j < bk.size(); ++j) {
                ci[j] += aki * bk[j];
            }
        }
    }
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.cols()) {
        throw InvalidInput("matmul_nt: column counts differ");
    }
    DenseMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ai = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            auto bj = b.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < ai.size(); ++k) {
                s += ai[k] * bj[k];
            }
            c(i, j) = s;
        }
    }
    return c;
}

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b)
{
    require_same_shape(a, b, "frobenius_inner");
    auto av = a.values();
    auto bv = b.values();
    double s = 0.0;
    for (std::size_t k = 0; k < av.size(); ++k) {
        s += av[k] * bv[k];
    }
    return s;
}

double max_abs(const DenseMatrix& m)
{
    double best = 0.0;
    for (double v : m.values()) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b)
{
    require_same_shape(a, b, "max_abs_diff");
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        best = std::max(best, std::abs(a.values()[k] - b.values()[k]));
    }
    return best;
}

DenseMatrix select_columns(const DenseMatrix& x, std::span<const std::size_t> indices)
{
    DenseMatrix out(x.rows(), indices.size());
    for (std::size_t t = 0; t < indices.size(); ++t) {
        if (indices[t] >= x.cols()) {
            throw InvalidInput("select_columns: index out of range");
        }
        for (std::size_t i = 0; i < x.rows(); ++i) {
            out(i, t) = x(i, indices[t]);
        }
    }
    return out;
}

void write_matrix(std::ostream& os, const DenseMatrix& m)
{
    os << m.rows() << ' ' << m.cols() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            if (j) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

DenseMatrix read_matrix(std::istream& is)
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(is >> rows >> cols) || rows == 0 || cols == 0) {
        throw InvalidInput("matrix text: expected positive `rows cols` header");
    }
    std::vector<double> data(rows * cols);
    for (std::size_t k = 0; k < data.size(); ++k) {
        if (!(is >> data[k])) {
            std::ostringstream msg;
            msg << "matrix text: expected " << data.size() << " values, got " << k;
            throw InvalidInput(msg.str());
        }
        if (!std::isfinite(data[k])) {
            throw InvalidInput("matrix text: non-finite value");
        }
    }
    return DenseMatrix(rows, cols, std::move(data));
}

void save_matrix(const std::string& path, const DenseMatrix& m)
{
    std::ofstream os(path);
    if (!os) {
        throw InvalidInput("cannot open '" + path + "' for writing");
    }
    write_matrix(os, m);
    if (!os) {
        throw InvalidInput("write to '" + path + "' failed");
    }
}

DenseMatrix load_matrix(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    try {
        return read_matrix(is);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

}  // namespace smv
