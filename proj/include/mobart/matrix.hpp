#ifndef MOBART_MATRIX_HPP
#define MOBART_MATRIX_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mobart {

using Point = std::vector<double>;
using PointSet = std::vector<Point>;

// Dense row-major matrix; rows are observations.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    static Matrix from_rows(const PointSet& rows)
    {
        if (rows.empty()) {
            return {};
        }
        Matrix out(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != out.cols_) {
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            }
            std::copy(rows[i].begin(), rows[i].end(), out.data_.begin() + static_cast<std::ptrdiff_t>(i * out.cols_));
        }
        return out;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    [[nodiscard]] std::vector<double> column(std::size_t j) const
    {
        std::vector<double> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            out[i] = (*this)(i, j);
        }
        return out;
    }

    void set_column(std::size_t j, std::span<const double> values)
    {
        for (std::size_t i = 0; i < rows_; ++i) {
            (*this)(i, j) = values[i];
        }
    }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace mobart

#endif
