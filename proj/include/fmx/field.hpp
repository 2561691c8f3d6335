#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fmx/errors.hpp"
#include "fmx/grid.hpp"

namespace fmx {

using cplx = std::complex<double>;

/// Which basis the samples of a field are expressed in.
enum class Space { physical, spectral };

/// One scalar component on a grid, stored in flattened (x-fastest) order.
template <class Scalar, Space S>
class Field {
public:
    using value_type = Scalar;
    static constexpr Space space = S;

    Field() = default;

    explicit Field(GridPtr grid) : grid_(std::move(grid)), data_(checked(grid_).size()) {}

    Field(GridPtr grid, std::vector<Scalar> data) : grid_(std::move(grid)), data_(std::move(data)) {
        if (data_.size() != checked(grid_).size()) {
            throw Mismatch("field has " + std::to_string(data_.size()) + " samples, grid needs " +
                           std::to_string(grid_->size()));
        }
    }

    const GridSpec& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }

    std::size_t size() const noexcept { return data_.size(); }
    std::span<Scalar> data() noexcept { return data_; }
    std::span<const Scalar> data() const noexcept { return data_; }

    Scalar& operator[](std::size_t p) noexcept { return data_[p]; }
    const Scalar& operator[](std::size_t p) const noexcept { return data_[p]; }

    Scalar& operator()(std::size_t j, std::size_t k, std::size_t l) { return data_[grid_->flatten(j, k, l)]; }
    const Scalar& operator()(std::size_t j, std::size_t k, std::size_t l) const {
        return data_[grid_->flatten(j, k, l)];
    }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

private:
    static const GridSpec& checked(const GridPtr& g) {
        if (!g) throw InvalidArgument("field constructed without a grid");
        return *g;
    }

    GridPtr grid_;
    std::vector<Scalar> data_;
};

using PhysicalField = Field<double, Space::physical>;
using ComplexPhysicalField = Field<cplx, Space::physical>;
using SpectralField = Field<cplx, Space::spectral>;

template <class A, class B>
void require_same_grid(const A& a, const B& b, const char* what) {
    if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
        throw Mismatch(std::string(what) + ": operands live on different grids");
    }
}

/// Samples f(x, y, z) at every collocation point.
template <class Fn>
PhysicalField sample_field(const GridPtr& grid, Fn&& f) {
    PhysicalField out(grid);
    const auto xs = grid->points(Axis::x);
    const auto ys = grid->points(Axis::y);
    const auto zs = grid->points(Axis::z);
    std::size_t p = 0;
    for (std::size_t l = 0; l < zs.size(); ++l)
        for (std::size_t k = 0; k < ys.size(); ++k)
            for (std::size_t j = 0; j < xs.size(); ++j) out[p++] = f(xs[j], ys[k], zs[l]);
    return out;
}

template <class Scalar, Space S>
double max_abs(const Field<Scalar, S>& f) {
    double m = 0.0;
    for (const auto& v : f) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace fmx
