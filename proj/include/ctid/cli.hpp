#pragma once

// Command-line front end. Exit codes: 0 all comparisons equal, 1 some
// comparison failed, 2 usage or parse error, 3 domain error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctid/ct.hpp"
#include "ctid/error.hpp"
#include "ctid/oracle.hpp"
#include "ctid/parse.hpp"
#include "ctid/scalar.hpp"
#include "ctid/verify.hpp"

namespace ctid::cli {

enum ExitCode : int { ok = 0, mismatch = 1, usage = 2, domain = 3 };

namespace detail {

struct UsageError : Error {
    using Error::Error;
};

/// `v`, `a..b` (step 1) or comma-separated lists of those.
inline std::vector<HalfInt> parse_half_list(const std::string& text) {
    std::vector<HalfInt> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(HalfInt::parse(item));
            continue;
        }
        HalfInt lo = HalfInt::parse(item.substr(0, dots));
        HalfInt hi = HalfInt::parse(item.substr(dots + 2));
        if (hi < lo) throw UsageError("empty range '" + item + "'");
        for (Integer t = lo.twice(); t <= hi.twice(); t += 2) out.push_back(HalfInt::from_twice(t));
    }
    if (out.empty()) throw UsageError("empty value list");
    return out;
}

inline std::vector<std::uint32_t> parse_n_list(const std::string& text) {
    std::vector<std::uint32_t> out;
    for (const HalfInt& h : parse_half_list(text)) {
        if (!h.is_integer() || h.sign() <= 0 || h.integer() > 64) {
            throw UsageError("--n expects positive integers up to 64, got " + to_string(h));
        }
        out.push_back(static_cast<std::uint32_t>(h.integer().get_ui()));
    }
    return out;
}

inline HalfInt parse_single(const std::string& flag, const std::string& text) {
    auto v = parse_half_list(text);
    if (v.size() != 1) throw UsageError(flag + " expects a single value");
    return v.front();
}

struct Options {
    std::string family;
    std::string n = "1";
    std::optional<std::string> a;
    std::optional<std::string> b;
    std::optional<std::string> c;
    std::optional<std::string> expr;
    std::optional<std::string> order;
    std::optional<std::string> rhs;
    std::string format = "text";
    std::optional<std::string> out;
    unsigned threads = 1;
    bool oracle = false;
};

inline int exit_code_for(const std::vector<Report>& reports) {
    bool failed = false;
    for (const auto& r : reports) {
        if (r.error_kind == ErrorKind::domain || r.error_kind == ErrorKind::precondition ||
            r.error_kind == ErrorKind::contract) {
            return domain;
        }
        if (r.error_kind == ErrorKind::mismatch || (r.equal && !*r.equal)) failed = true;
    }
    return failed ? mismatch : ok;
}

inline void write_reports(const std::vector<Report>& reports, const std::string& format, bool single,
                          std::ostream& os) {
    if (format == "json") {
        if (single) {
            os << to_json(reports.front()).dump() << "\n";
        } else {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : reports) arr.push_back(to_json(r));
            os << arr.dump(2) << "\n";
        }
    } else if (format == "csv") {
        os << csv_header() << "\n";
        for (const auto& r : reports) os << to_csv_row(r) << "\n";
    } else {
        for (const auto& r : reports) os << to_text(r) << "\n";
    }
}

/// Validates the custom integrand source: order must name exactly the variables present.
inline Integrand custom_integrand(const Options& o) {
    if (!o.order) throw UsageError("--order is required with --expr");
    Integrand in{parse_integrand(*o.expr), parse_order(*o.order)};
    std::set<VarId> in_order(in.order.vars().begin(), in.order.vars().end());
    if (in_order != in.expr.variables()) {
        throw UsageError("--order must list exactly the variables of --expr");
    }
    return in;
}

inline VerifyOptions verify_options(const Options& o) {
    VerifyOptions v;
    v.oracle = o.oracle;
    return v;
}

inline std::vector<Report> run_verify(const Options& o) {
    FamilySpec spec;
    if (o.expr) {
        if (!o.family.empty() && o.family != "custom") throw UsageError("--expr implies the custom family");
        spec.family = Family::custom;
        spec.custom = custom_integrand(o);
        spec.n = static_cast<std::uint32_t>(spec.custom->order.vars().size());
        if (o.rhs) spec.expected = parse_rational(*o.rhs);
    } else {
        if (o.family.empty()) throw UsageError("--family or --expr is required");
        spec.family = parse_family(o.family);
        if (spec.family == Family::custom) throw UsageError("custom family requires --expr and --order");
        auto ns = parse_n_list(o.n);
        if (ns.size() != 1) throw UsageError("verify takes a single --n; use sweep for ranges");
        spec.n = ns.front();
        auto need = [&](const std::optional<std::string>& v, const char* flag) {
            if (!v) throw UsageError(to_string(spec.family) + " requires " + flag);
            return parse_single(flag, *v);
        };
        if (spec.family == Family::fact || spec.family == Family::morris) {
            spec.a = need(o.a, "--a");
            spec.c = need(o.c, "--c");
        }
        if (spec.family == Family::morris) spec.b = need(o.b, "--b");
    }
    return {verify_captured(spec, verify_options(o))};
}

inline std::vector<Report> run_sweep(const Options& o) {
    if (o.family.empty()) throw UsageError("sweep requires --family");
    Family family = parse_family(o.family);
    if (family == Family::custom) throw UsageError("sweep does not support the custom family");
    SweepRanges ranges;
    ranges.n = parse_n_list(o.n);
    auto need = [&](const std::optional<std::string>& v, const char* flag) {
        if (!v) throw UsageError(o.family + " requires " + flag);
        return parse_half_list(*v);
    };
    if (family == Family::fact || family == Family::morris) {
        ranges.a = need(o.a, "--a");
        ranges.c = need(o.c, "--c");
    }
    if (family == Family::morris) ranges.b = need(o.b, "--b");
    return sweep(family, ranges, std::max(1U, o.threads), verify_options(o));
}

}  // namespace detail

/// Runs the tool on argv-style arguments (program name excluded).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Exact iterated constant terms and identity verification", "ctid"};
    app.require_subcommand(1, 1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "text|json|csv")->check(CLI::IsMember({"text", "json", "csv"}));
        sub->add_option("--out", o.out, "write output to PATH instead of stdout");
    };
    auto add_params = [&](CLI::App* sub, bool ranges) {
        sub->add_option("--family", o.family, "mm|fact|morris");
        sub->add_option("--n", o.n, ranges ? "N or A..B" : "N");
        sub->add_option("--a", o.a, "a parameter");
        sub->add_option("--b", o.b, "b parameter");
        sub->add_option("--c", o.c, "c parameter (p/q)");
        sub->add_flag("--oracle", o.oracle, "cross-check every CT step against the specialization oracle");
        add_common(sub);
    };

    CLI::App* verify_cmd = app.add_subcommand("verify", "compare both sides of one identity instance");
    add_params(verify_cmd, false);
    verify_cmd->add_option("--expr", o.expr, "custom integrand");
    verify_cmd->add_option("--order", o.order, "x1,x2,... innermost first");
    verify_cmd->add_option("--rhs", o.rhs, "expected value for a custom integrand");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "verify over a parameter grid");
    add_params(sweep_cmd, true);
    sweep_cmd->add_option("--threads", o.threads, "concurrency width");

    CLI::App* ct_cmd = app.add_subcommand("ct", "iterated constant term of a custom integrand");
    ct_cmd->add_option("--expr", o.expr, "integrand")->required();
    ct_cmd->add_option("--order", o.order, "x1,x2,... innermost first");
    ct_cmd->add_flag("--oracle", o.oracle, "cross-check every CT step against the specialization oracle");
    add_common(ct_cmd);

    CLI::App* selberg_cmd = app.add_subcommand("selberg", "evaluate S_n(a,b,c)");
    selberg_cmd->add_option("--n", o.n, "N")->required();
    selberg_cmd->add_option("--a", o.a, "a")->required();
    selberg_cmd->add_option("--b", o.b, "b")->required();
    selberg_cmd->add_option("--c", o.c, "c")->required();
    add_common(selberg_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "ctid: " << e.what() << "\n" << app.help();
        return usage;
    }

    std::ofstream file;
    if (o.out) {
        file.open(*o.out);
        if (!file) {
            err << "ctid: cannot open " << *o.out << "\n";
            return usage;
        }
    }
    std::ostream& os = o.out ? static_cast<std::ostream&>(file) : out;

    try {
        if (*verify_cmd || *sweep_cmd) {
            auto reports = *verify_cmd ? run_verify(o) : run_sweep(o);
            write_reports(reports, o.format, static_cast<bool>(*verify_cmd), os);
            return exit_code_for(reports);
        }
        if (*ct_cmd) {
            Integrand in = custom_integrand(o);
            CtStats stats;
            PointSampler sampler(VerifyOptions{}.seed);
            CtStepHook hook;
            if (o.oracle) {
                hook = [&sampler](const Expr& before, VarId v, const Expr& after) {
                    cross_check_step(before, v, after, sampler);
                };
            }
            PiScalar value = ct_iterated(in.expr, in.order, &stats, hook);
            if (o.format == "json") {
                os << nlohmann::json{{"ct", to_string(value)}, {"peak_terms", stats.peak_terms}}.dump() << "\n";
            } else if (o.format == "csv") {
                os << "ct,peak_terms\n" << to_string(value) << "," << stats.peak_terms << "\n";
            } else {
                os << to_string(value) << "\n";
            }
            return ok;
        }
        // selberg
        auto ns = parse_n_list(o.n);
        if (ns.size() != 1) throw UsageError("selberg takes a single --n");
        PiScalar value = selberg_morris(ns.front(), parse_single("--a", *o.a), parse_single("--b", *o.b),
                                        parse_single("--c", *o.c));
        if (o.format == "json") {
            os << nlohmann::json{{"selberg", to_string(value)}}.dump() << "\n";
        } else {
            os << to_string(value) << "\n";
        }
        return ok;
    } catch (const UsageError& e) {
        err << "ctid: " << e.what() << "\n";
        return usage;
    } catch (const ParseError& e) {
        err << "ctid: parse error: " << e.what() << "\n";
        return usage;
    } catch (const OracleMismatch& e) {
        err << "ctid: " << e.what() << "\n";
        return mismatch;
    } catch (const PreconditionError& e) {
        // Malformed parameter values (e.g. --c 1/3) are usage errors at this layer.
        err << "ctid: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        err << "ctid: " << e.what() << "\n";
        return domain;
    }
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace ctid::cli
