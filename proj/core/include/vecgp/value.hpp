#pragma once

#include <cassert>
#include <span>
#include <utility>
#include <vector>

namespace vecgp {

// A value flowing through program evaluation: either a scalar or a vector
// whose length always equals the dataset feature count.
class Value {
public:
    Value() = default;

    static Value scalar(double x) {
        Value v;
        v.scalar_ = true;
        v.x_ = x;
        return v;
    }

    static Value vector(std::vector<double> components) {
        Value v;
        v.scalar_ = false;
        v.components_ = std::move(components);
        return v;
    }

    bool is_scalar() const { return scalar_; }

    double scalar_value() const {
        assert(scalar_);
        return x_;
    }

    std::span<const double> components() const {
        assert(!scalar_);
        return components_;
    }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.scalar_ != b.scalar_) return false;
        return a.scalar_ ? a.x_ == b.x_ : a.components_ == b.components_;
    }

private:
    bool scalar_ = true;
    double x_ = 0.0;
    std::vector<double> components_;
};

// Scalar output of a program: scalars pass through, vectors collapse to the
// sum of their components.
inline double reduce_to_scalar(const Value& v) {
    if (v.is_scalar()) return v.scalar_value();
    double sum = 0.0;
    for (double c : v.components()) sum += c;
    return sum;
}

} // namespace vecgp
