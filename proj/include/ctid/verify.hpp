#pragma once

// Verification runs: evaluate both sides of an identity family at a parameter
// point, compare exactly and up to sign, and serialize the resulting reports.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctid/ct.hpp"
#include "ctid/error.hpp"
#include "ctid/linform.hpp"
#include "ctid/oracle.hpp"
#include "ctid/scalar.hpp"

namespace ctid {

enum class Family { mm, fact, morris, custom };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::mm: return "mm";
        case Family::fact: return "fact";
        case Family::morris: return "morris";
        case Family::custom: return "custom";
    }
    return "?";
}

inline Family parse_family(std::string_view s) {
    if (s == "mm") return Family::mm;
    if (s == "fact") return Family::fact;
    if (s == "morris") return Family::morris;
    if (s == "custom") return Family::custom;
    throw PreconditionError("unknown family '" + std::string(s) + "'");
}

struct FamilySpec {
    Family family = Family::mm;
    std::uint32_t n = 1;
    std::optional<HalfInt> a;
    std::optional<HalfInt> b;
    std::optional<HalfInt> c;
    /// custom only
    std::optional<Integrand> custom;
    /// custom only: value the CT is compared against, when given
    std::optional<Rational> expected;
};

enum class ErrorKind { none, domain, precondition, contract, mismatch };

struct Report {
    FamilySpec spec;
    std::optional<PiScalar> lhs;
    std::optional<PiScalar> rhs;
    std::optional<bool> equal;
    std::optional<bool> abs_equal;
    std::optional<int> sign_ratio;
    double elapsed_ms = 0.0;
    std::size_t peak_terms = 0;
    std::optional<std::string> error;
    ErrorKind error_kind = ErrorKind::none;
};

struct VerifyOptions {
    /// Cross-check every ct_once step against the specialization oracle.
    bool oracle = false;
    std::uint64_t seed = 20140709;
};

inline std::string describe(const FamilySpec& spec) {
    std::string s = to_string(spec.family) + " n=" + std::to_string(spec.n);
    if (spec.a) s += " a=" + to_string(*spec.a);
    if (spec.b) s += " b=" + to_string(*spec.b);
    if (spec.c) s += " c=" + to_string(*spec.c);
    return s;
}

namespace verify_detail {

inline const HalfInt& require(const std::optional<HalfInt>& p, const char* name, const FamilySpec& spec) {
    if (!p) throw PreconditionError(to_string(spec.family) + " requires parameter " + name);
    return *p;
}

inline Integer require_integer(const std::optional<HalfInt>& p, const char* name, const FamilySpec& spec) {
    const HalfInt& h = require(p, name, spec);
    if (!h.is_integer()) throw PreconditionError(std::string(name) + " must be an integer for family " + to_string(spec.family));
    return h.integer();
}

template <typename E>
[[noreturn]] void rethrow_with_context(const FamilySpec& spec, const E& e) {
    throw E(describe(spec) + ": " + e.what());
}

inline void fill_comparison(Report& r) {
    if (!r.lhs || !r.rhs) return;
    const PiScalar& l = *r.lhs;
    const PiScalar& rr = *r.rhs;
    r.equal = l == rr;
    r.abs_equal = abs(l.coeff()) == abs(rr.coeff()) && l.sqrtpi_pow() == rr.sqrtpi_pow();
    if (*r.abs_equal && !l.is_zero()) r.sign_ratio = sgn(l.coeff()) * sgn(rr.coeff());
}

}  // namespace verify_detail

/// Computes both sides for one parameter point. Errors propagate with the
/// family and parameters prefixed to the message.
inline Report verify(const FamilySpec& spec, const VerifyOptions& options = {}) {
    using namespace verify_detail;
    Report report;
    report.spec = spec;
    const auto start = std::chrono::steady_clock::now();
    try {
        Integrand integrand;
        switch (spec.family) {
            case Family::mm:
                report.rhs = PiScalar(Rational(mm_rhs(spec.n)));
                integrand = build_mm(spec.n);
                break;
            case Family::fact: {
                Integer a = require_integer(spec.a, "a", spec);
                const HalfInt& c = require(spec.c, "c", spec);
                report.rhs = fact_rhs(spec.n, a, c);
                integrand = build_fact(spec.n, a, c);
                break;
            }
            case Family::morris: {
                Integer a = require_integer(spec.a, "a", spec);
                Integer b = require_integer(spec.b, "b", spec);
                const HalfInt& c = require(spec.c, "c", spec);
                report.rhs = selberg_morris(spec.n, *spec.a, *spec.b, c);
                integrand = build_morris(spec.n, a, b, c);
                break;
            }
            case Family::custom:
                if (!spec.custom) throw PreconditionError("custom family requires an expression and order");
                integrand = *spec.custom;
                if (spec.expected) report.rhs = PiScalar(*spec.expected);
                break;
        }
        CtStats stats;
        CtStepHook hook;
        PointSampler sampler(options.seed);
        if (options.oracle) {
            hook = [&sampler](const Expr& before, VarId v, const Expr& after) {
                cross_check_step(before, v, after, sampler);
            };
        }
        report.lhs = ct_iterated(integrand.expr, integrand.order, &stats, hook);
        report.peak_terms = stats.peak_terms;
    } catch (const DomainError& e) {
        rethrow_with_context(spec, e);
    } catch (const PreconditionError& e) {
        rethrow_with_context(spec, e);
    } catch (const ContractError& e) {
        rethrow_with_context(spec, e);
    } catch (const OracleMismatch& e) {
        rethrow_with_context(spec, e);
    }
    fill_comparison(report);
    report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// Like verify, but failures become part of the report.
inline Report verify_captured(const FamilySpec& spec, const VerifyOptions& options = {}) {
    auto failed = [&](ErrorKind kind, const std::exception& e) {
        Report r;
        r.spec = spec;
        r.error = e.what();
        r.error_kind = kind;
        return r;
    };
    try {
        return verify(spec, options);
    } catch (const DomainError& e) {
        return failed(ErrorKind::domain, e);
    } catch (const PreconditionError& e) {
        return failed(ErrorKind::precondition, e);
    } catch (const OracleMismatch& e) {
        return failed(ErrorKind::mismatch, e);
    } catch (const Error& e) {
        return failed(ErrorKind::contract, e);
    }
}

/// Parameter grid. Empty lists mean "not used by this family".
struct SweepRanges {
    std::vector<std::uint32_t> n;
    std::vector<HalfInt> a;
    std::vector<HalfInt> b;
    std::vector<HalfInt> c;
};

/// Grid points in n-major, then a, b, c order.
inline std::vector<FamilySpec> grid(Family family, const SweepRanges& ranges) {
    auto opt_list = [](const std::vector<HalfInt>& v) {
        std::vector<std::optional<HalfInt>> out(v.begin(), v.end());
        if (out.empty()) out.emplace_back();
        return out;
    };
    std::vector<FamilySpec> specs;
    for (std::uint32_t n : ranges.n) {
        for (const auto& a : opt_list(ranges.a)) {
            for (const auto& b : opt_list(ranges.b)) {
                for (const auto& c : opt_list(ranges.c)) {
                    FamilySpec s;
                    s.family = family;
                    s.n = n;
                    s.a = a;
                    s.b = b;
                    s.c = c;
                    specs.push_back(std::move(s));
                }
            }
        }
    }
    return specs;
}

/// One report per grid point, in grid order, computed by up to `width` threads.
inline std::vector<Report> sweep(Family family, const SweepRanges& ranges, unsigned width = 1,
                                 const VerifyOptions& options = {}) {
    const std::vector<FamilySpec> specs = grid(family, ranges);
    std::vector<Report> reports(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) reports[i] = verify_captured(specs[i], options);
    };
    width = std::max(1U, std::min<unsigned>(width, static_cast<unsigned>(specs.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
    return reports;
}

// --- serialization ---------------------------------------------------------

/// Column order of the CSV form; also the key set of the JSON form.
inline const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols{"family", "n",   "a",          "b",          "c",
                                               "lhs",    "rhs", "equal",      "abs_equal",  "sign_ratio",
                                               "elapsed_ms", "peak_terms", "error"};
    return cols;
}

inline nlohmann::json to_json(const Report& r) {
    using nlohmann::json;
    auto opt_half = [](const std::optional<HalfInt>& h) { return h ? json(to_string(*h)) : json(nullptr); };
    auto opt_scalar = [](const std::optional<PiScalar>& s) { return s ? json(to_string(*s)) : json(nullptr); };
    auto opt_bool = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
    json j;
    j["family"] = to_string(r.spec.family);
    j["n"] = r.spec.n;
    j["a"] = opt_half(r.spec.a);
    j["b"] = opt_half(r.spec.b);
    j["c"] = opt_half(r.spec.c);
    j["lhs"] = opt_scalar(r.lhs);
    j["rhs"] = opt_scalar(r.rhs);
    j["equal"] = opt_bool(r.equal);
    j["abs_equal"] = opt_bool(r.abs_equal);
    j["sign_ratio"] = r.sign_ratio ? json(*r.sign_ratio) : json(nullptr);
    j["elapsed_ms"] = r.elapsed_ms;
    j["peak_terms"] = r.peak_terms;
    j["error"] = r.error ? json(*r.error) : json(nullptr);
    return j;
}

namespace verify_detail {

inline std::string csv_field(const nlohmann::json& v) {
    if (v.is_null()) return "";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

inline std::string format_ms(double ms) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << ms;
    return os.str();
}

inline std::string sign_text(const std::optional<int>& s) {
    if (!s) return "undefined";
    return *s > 0 ? "+1" : "-1";
}

}  // namespace verify_detail

inline std::string csv_header() {
    std::string out;
    for (const auto& c : report_columns()) out += (out.empty() ? "" : ",") + c;
    return out;
}

inline std::string to_csv_row(const Report& r) {
    nlohmann::json j = to_json(r);
    std::string out;
    for (const auto& col : report_columns()) {
        if (!out.empty()) out += ",";
        out += col == "elapsed_ms" ? verify_detail::format_ms(r.elapsed_ms) : verify_detail::csv_field(j[col]);
    }
    return out;
}

/// `family=mm n=2 lhs=32 rhs=32 equal=true abs_equal=true sign_ratio=+1 peak_terms=3 elapsed_ms=0.120`
inline std::string to_text(const Report& r) {
    auto opt_bool = [](const std::optional<bool>& b) -> std::string {
        return b ? (*b ? "true" : "false") : "undefined";
    };
    std::string s = "family=" + to_string(r.spec.family) + " n=" + std::to_string(r.spec.n);
    if (r.spec.a) s += " a=" + to_string(*r.spec.a);
    if (r.spec.b) s += " b=" + to_string(*r.spec.b);
    if (r.spec.c) s += " c=" + to_string(*r.spec.c);
    if (r.error) return s + " error=\"" + *r.error + "\"";
    s += " lhs=" + (r.lhs ? to_string(*r.lhs) : std::string("undefined"));
    s += " rhs=" + (r.rhs ? to_string(*r.rhs) : std::string("undefined"));
    s += " equal=" + opt_bool(r.equal) + " abs_equal=" + opt_bool(r.abs_equal);
    s += " sign_ratio=" + verify_detail::sign_text(r.sign_ratio);
    s += " peak_terms=" + std::to_string(r.peak_terms);
    s += " elapsed_ms=" + verify_detail::format_ms(r.elapsed_ms);
    return s;
}

}  // namespace ctid
