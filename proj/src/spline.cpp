#include "divflt/spline.hpp"

#include "divflt/error.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

namespace divflt {

namespace {

void silence_gsl()
{
    static const bool done = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)done;
}

}  // namespace

struct NaturalSpline::Impl {
    gsl_spline* spline = nullptr;
    ~Impl() { gsl_spline_free(spline); }
};

void NaturalSpline::Deleter::operator()(Impl* p) const { delete p; }

NaturalSpline::NaturalSpline(std::span<const double> x, std::span<const double> y)
{
    silence_gsl();
    if (x.size() != y.size() || x.size() < 3)
        throw Error(ErrorCode::internal, "spline needs matching knot arrays of length >= 3");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw Error(ErrorCode::internal, "spline knots must be strictly increasing");
    impl_.reset(new Impl);
    impl_->spline = gsl_spline_alloc(gsl_interp_cspline, x.size());
    if (!impl_->spline ||
        gsl_spline_init(impl_->spline, x.data(), y.data(), x.size()) != GSL_SUCCESS)
        throw Error(ErrorCode::internal, "spline construction failed");
    x0_ = x.front();
    x1_ = x.back();
    y0_ = y.front();
    y1_ = y.back();
    d0_ = gsl_spline_eval_deriv(impl_->spline, x0_, nullptr);
    d1_ = gsl_spline_eval_deriv(impl_->spline, x1_, nullptr);
}

double NaturalSpline::operator()(double x) const
{
    if (x < x0_) return y0_ + d0_ * (x - x0_);
    if (x > x1_) return y1_ + d1_ * (x - x1_);
    return gsl_spline_eval(impl_->spline, x, nullptr);
}

double NaturalSpline::derivative(double x) const
{
    if (x < x0_) return d0_;
    if (x > x1_) return d1_;
    return gsl_spline_eval_deriv(impl_->spline, x, nullptr);
}

std::vector<double> NaturalSpline::evaluate(std::span<const double> xs) const
{
    gsl_interp_accel* acc = gsl_interp_accel_alloc();
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (x < x0_) out[i] = y0_ + d0_ * (x - x0_);
        else if (x > x1_) out[i] = y1_ + d1_ * (x - x1_);
        else out[i] = gsl_spline_eval(impl_->spline, x, acc);
    }
    gsl_interp_accel_free(acc);
    return out;
}

}  // namespace divflt
