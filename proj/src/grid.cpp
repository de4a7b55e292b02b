#include "rdlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdlab {

double Field::min() const {
    return *std::min_element(values_.begin(), values_.end());
}

double Field::max() const {
    return *std::max_element(values_.begin(), values_.end());
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field::mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(*this, o, "Field::operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(*this, o, "Field::operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

void require_same_grid(const Field& a, const Field& b, const std::string& what) {
    if (a.grid() != b.grid())
        throw std::invalid_argument(what + ": fields live on different grids");
}

} // namespace rdlab
