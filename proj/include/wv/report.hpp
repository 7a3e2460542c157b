#pragma once

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "wv/verify.hpp"

namespace wv {

/// Locale-independent decimal rendering with 17 significant digits, enough
/// to round-trip any double bit pattern. Keeps golden outputs byte-stable.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

class JsonWriter {
  public:
    JsonWriter& field(const std::string& key, double v) {
        sep();
        out_ << '"' << key << "\":" << format_double(v);
        return *this;
    }
    JsonWriter& field(const std::string& key, bool v) {
        sep();
        out_ << '"' << key << "\":" << (v ? "true" : "false");
        return *this;
    }
    JsonWriter& field(const std::string& key, const std::string& v) {
        sep();
        out_ << '"' << key << "\":\"" << v << '"';
        return *this;
    }
    JsonWriter& field(const std::string& key, const char* v) {
        return field(key, std::string(v));
    }
    JsonWriter& null_field(const std::string& key) {
        sep();
        out_ << '"' << key << "\":null";
        return *this;
    }
    JsonWriter& raw_field(const std::string& key, const std::string& raw) {
        sep();
        out_ << '"' << key << "\":" << raw;
        return *this;
    }
    std::string str() const { return "{" + out_.str() + "}"; }

  private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }
    std::ostringstream out_;
    bool first_ = true;
};

inline std::string flags_json(const ConditionFlags& flags) {
    JsonWriter w;
    w.field("lambda1_positive_somewhere", flags.lambda1_positive_somewhere)
        .field("envelope_admissible", flags.envelope_admissible)
        .field("h_over_r_eventually_nonincreasing", flags.h_over_r_eventually_nonincreasing)
        .field("h_eventually_nondecreasing_and_unbounded",
               flags.h_eventually_nondecreasing_and_unbounded);
    if (flags.tau0)
        w.field("tau0", *flags.tau0);
    else
        w.null_field("tau0");
    return w.str();
}

}  // namespace detail

/// Verification report JSON with the fixed field layout.
inline std::string to_json(const VerificationReport& rep) {
    detail::JsonWriter w;
    w.field("lhs", rep.lhs)
        .field("rhs", rep.rhs)
        .field("gap", rep.gap)
        .field("relative_slack", rep.relative_slack)
        .field("b0", rep.constants.b0)
        .field("b1", rep.constants.b1)
        .field("avr", rep.avr.value)
        .field("avr_error", rep.avr.error_estimate)
        .field("equality_class", to_string(rep.equality_class));
    if (rep.limit_ratio)
        w.field("limit_ratio", *rep.limit_ratio);
    else
        w.null_field("limit_ratio");
    w.raw_field("flags", detail::flags_json(rep.flags));
    return w.str();
}

/// Constants report: decay integrals, AVR and the condition flags.
inline std::string constants_json(const DecayConstants& c, const AvrEstimate& avr,
                                  const ConditionFlags& flags) {
    detail::JsonWriter w;
    w.field("b0", c.b0)
        .field("b1", c.b1)
        .field("b0_error", c.b0_error)
        .field("b1_error", c.b1_error)
        .field("avr", avr.value)
        .field("avr_error", avr.error_estimate)
        .field("avr_method", to_string(avr.method))
        .raw_field("flags", detail::flags_json(flags));
    return w.str();
}

/// Sweep CSV: fixed header, one row per slice, footer metadata as comments.
inline std::string to_csv(const SweepResult& sweep) {
    std::ostringstream out;
    out << "r0,area,H,F,F_prime,lhs,rhs,gap,class\n";
    for (const auto& row : sweep.rows) {
        out << format_double(row.r0) << ',';
        if (!row.error.empty()) {
            out << ",,,,,,,error\n";
            continue;
        }
        out << format_double(row.area) << ',' << format_double(row.mean_curvature) << ','
            << format_double(row.functional) << ',' << format_double(row.functional_derivative)
            << ',' << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
            << format_double(row.gap) << ',' << to_string(row.cls) << '\n';
    }
    out << "# f_prime_sign_changes=" << sweep.functional_roots.size() << '\n';
    for (double r : sweep.functional_roots)
        out << "# f_prime_root_r0=" << format_double(r) << '\n';
    return out.str();
}

}  // namespace wv
