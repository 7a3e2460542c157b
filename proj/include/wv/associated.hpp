#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "wv/errors.hpp"
#include "wv/numerics/quadrature.hpp"

namespace wv {

/// Tail behaviour of a curvature-decay bound on [T, infinity).
struct TailDescriptor {
    enum class Kind { compact_support, power_law, probe };
    Kind kind = Kind::probe;
    double value = 0.0;  // support radius, or decay exponent p

    static TailDescriptor compact(double radius) { return {Kind::compact_support, radius}; }
    static TailDescriptor power(double p) { return {Kind::power_law, p}; }
    static TailDescriptor probe() { return {Kind::probe, 0.0}; }
};

/// The curvature-decay bound lambda(t): nonnegative, nonincreasing and
/// integrable against t dt. Captures the evaluator together with a tail
/// descriptor and the provenance of the bound.
class AssociatedFunction {
  public:
    enum class Provenance { envelope_derived, user_supplied, builtin };

    AssociatedFunction() = default;
    AssociatedFunction(std::function<double(double)> eval, TailDescriptor tail, Provenance prov)
        : eval_(std::move(eval)), tail_(tail), provenance_(prov) {}

    static AssociatedFunction zero() {
        AssociatedFunction f([](double) { return 0.0; }, TailDescriptor::compact(0.0),
                             Provenance::builtin);
        f.is_zero_ = true;
        return f;
    }

    double operator()(double t) const { return eval_(t); }
    const TailDescriptor& tail() const { return tail_; }
    Provenance provenance() const { return provenance_; }
    bool is_zero() const { return is_zero_; }

    /// Shifted bound t -> lambda(r0 + t), the coefficient seen along an
    /// outward ray from the slice at r0.
    AssociatedFunction shift(double r0) const {
        if (r0 == 0.0 || is_zero_) return *this;
        TailDescriptor tail = tail_;
        if (tail.kind == TailDescriptor::Kind::compact_support)
            tail.value = std::max(0.0, tail.value - r0);
        auto base = eval_;
        AssociatedFunction out([base, r0](double t) { return base(r0 + t); }, tail, provenance_);
        return out;
    }

    /// Probes nonnegativity and monotone decay on a sampled grid; throws
    /// InvalidParameters with the offending abscissa otherwise.
    void validate(double t_hi = 1e4, int points = 200) const {
        double prev = eval_(0.0);
        if (prev < -1e-12) throw InvalidParameters("associated function negative at t = 0");
        const double scale = std::max(1.0, std::abs(prev));
        for (int i = 1; i <= points; ++i) {
            const double t = t_hi * std::pow(10.0, -6.0 * (1.0 - double(i) / points));
            const double v = eval_(t);
            if (!std::isfinite(v))
                throw InvalidParameters("associated function not finite at t = " + std::to_string(t));
            if (v < -1e-12 * scale)
                throw InvalidParameters("associated function negative at t = " + std::to_string(t));
            if (v > prev + 1e-10 * scale)
                throw InvalidParameters("associated function increases at t = " + std::to_string(t));
            prev = v;
        }
    }

    std::optional<numerics::TailHint> tail_hint(int t_power = 0) const {
        switch (tail_.kind) {
            case TailDescriptor::Kind::compact_support:
                return numerics::TailHint::compact(tail_.value);
            case TailDescriptor::Kind::power_law:
                return numerics::TailHint::power(tail_.value - t_power);
            case TailDescriptor::Kind::probe:
                return std::nullopt;
        }
        return std::nullopt;
    }

  private:
    std::function<double(double)> eval_;
    TailDescriptor tail_;
    Provenance provenance_ = Provenance::user_supplied;
    bool is_zero_ = false;
};

}  // namespace wv
