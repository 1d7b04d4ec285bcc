#pragma once

#include <memory>
#include <span>
#include <vector>

namespace divflt {

/// Natural cubic spline with linear extrapolation from the end slopes.
class NaturalSpline {
public:
    NaturalSpline(std::span<const double> x, std::span<const double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    std::vector<double> evaluate(std::span<const double> xs) const;

    double front() const { return x0_; }
    double back() const { return x1_; }

private:
    struct Impl;
    struct Deleter {
        void operator()(Impl* p) const;
    };
    std::unique_ptr<Impl, Deleter> impl_;
    double x0_, x1_, y0_, y1_, d0_, d1_;
};

}  // namespace divflt
