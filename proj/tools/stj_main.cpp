// stj: exact Stieltjes integration for piecewise-polynomial integrands and
// bounded-variation integrators.  Runs .stj programs or single inline queries;
// all results are exact rationals or certified enclosures.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stj/config.hpp"
#include "stj/dsl.hpp"
#include "stj/render.hpp"
#include "stj/session.hpp"

namespace {

struct GlobalOpts {
    std::string tol = "1/1000000";
    int max_refine = 60;
    std::string format = "text";
    std::string method = "auto";
    std::optional<std::uint64_t> seed;
};

stj::session::Options session_options(const GlobalOpts& g) {
    stj::session::Options opt;
    opt.tol = stj::Rational::parse(g.tol);
    if (opt.tol.sign() <= 0) throw stj::invalid_value("--tol must be positive");
    opt.max_refine = g.max_refine;
    opt.method = g.method == "enclosure" ? stj::Method::Enclosure : stj::Method::Auto;
    opt.seed = g.seed;
    return opt;
}

void emit(const std::vector<stj::session::OutputRecord>& records, const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : records) arr.push_back(stj::session::to_json(r));
        std::cout << arr.dump(2) << "\n";
    } else {
        for (size_t i = 0; i < records.size(); ++i) {
            if (i) std::cout << "\n";
            std::cout << stj::session::to_text(records[i]);
        }
        std::cout << "(~ values are 15-digit decimal approximations, not authoritative)\n";
    }
}

std::string read_program_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw stj::invalid_value("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Builds a one-query program around inline expression arguments.
stj::dsl::Program inline_program(const std::string& f_expr, const std::string& g_expr,
                                 stj::dsl::Query q) {
    stj::dsl::Program prog;
    prog.bindings.emplace_back("f", stj::dsl::parse_expression(f_expr));
    q.f = "f";
    if (!g_expr.empty()) {
        prog.bindings.emplace_back("g", stj::dsl::parse_expression(g_expr));
        q.g = "g";
    }
    prog.queries.push_back(std::move(q));
    return prog;
}

std::pair<stj::Rational, stj::Rational> parse_on(const std::string& s) {
    // accepts "[lo,hi]" or "lo,hi"
    std::string body = s;
    if (!body.empty() && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string::npos) throw stj::invalid_value("--on expects [lo,hi]");
    stj::Rational lo = stj::Rational::parse(body.substr(0, comma));
    stj::Rational hi = stj::Rational::parse(body.substr(comma + 1));
    if (!(lo < hi)) throw stj::invalid_value("--on interval is empty");
    return {lo, hi};
}

std::vector<stj::Rational> parse_list(const std::string& s) {
    std::vector<stj::Rational> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(stj::Rational::parse(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    stj::config::load_env_overrides();

    CLI::App app{"exact Ross-Darboux-Stieltjes integration"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--tol", g.tol, "enclosure tolerance (rational)")->capture_default_str();
    app.add_option("--max-refine", g.max_refine, "refinement round limit")
        ->capture_default_str();
    app.add_option("--format", g.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--method", g.method, "integration path for integrate queries")
        ->check(CLI::IsMember({"auto", "enclosure"}))
        ->capture_default_str();
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "seed for sampled-sum demo rows");

    std::string file, f_expr, g_expr, on, probe, deltas, base;
    int rounds = -1;
    bool canonical = false;

    auto* run = app.add_subcommand("run", "run a .stj program (use - for stdin)");
    run->add_option("file", file, "program file")->required();
    run->add_flag("--canonical", canonical, "also print the canonical program text");

    auto add_on = [&](CLI::App* cmd) {
        cmd->add_option("--on", on, "closed interval [lo,hi]")->required();
    };
    auto* integrate = app.add_subcommand("integrate", "RDS integral of F against dG");
    integrate->add_option("f", f_expr, "integrand expression")->required();
    integrate->add_option("g", g_expr, "integrator expression")->required();
    add_on(integrate);

    auto* compare = app.add_subcommand("compare", "RDS vs DS vs discrepancy");
    compare->add_option("f", f_expr)->required();
    compare->add_option("g", g_expr)->required();
    add_on(compare);

    auto* parts = app.add_subcommand("parts", "integration by parts check");
    parts->add_option("f", f_expr)->required();
    parts->add_option("g", g_expr)->required();
    add_on(parts);

    auto* decompose = app.add_subcommand("decompose", "Jordan and saltus decomposition");
    decompose->add_option("f", f_expr)->required();
    add_on(decompose);

    auto* check = app.add_subcommand("check", "RDS integrability");
    check->add_option("f", f_expr)->required();
    check->add_option("g", g_expr)->required();
    add_on(check);

    auto* sums = app.add_subcommand("sums", "Riemann-type probe tables");
    sums->add_option("probe", probe, "mrs, rps, or rrs")
        ->check(CLI::IsMember({"mrs", "rps", "rrs"}))
        ->required();
    sums->add_option("f", f_expr)->required();
    sums->add_option("g", g_expr)->required();
    add_on(sums);
    sums->add_option("--deltas", deltas, "comma-separated mesh targets (mrs/rrs)");
    sums->add_option("--base", base, "comma-separated base partition points (rps)");
    sums->add_option("--rounds", rounds, "bisection rounds (rps)");

    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) g.seed = seed_val;

    try {
        stj::session::Options opt = session_options(g);
        stj::dsl::Program prog;
        if (run->parsed()) {
            prog = stj::dsl::parse(read_program_text(file));
            if (canonical) std::cout << stj::dsl::print(prog);
        } else {
            stj::dsl::Query q;
            auto [lo, hi] = parse_on(on);
            q.lo = lo;
            q.hi = hi;
            if (integrate->parsed()) q.kind = stj::dsl::QueryKind::Integrate;
            if (compare->parsed()) q.kind = stj::dsl::QueryKind::Compare;
            if (parts->parsed()) q.kind = stj::dsl::QueryKind::Parts;
            if (decompose->parsed()) {
                q.kind = stj::dsl::QueryKind::Decompose;
                g_expr.clear();
            }
            if (check->parsed()) q.kind = stj::dsl::QueryKind::Check;
            if (sums->parsed()) {
                q.kind = stj::dsl::QueryKind::Sums;
                q.probe = probe == "mrs"   ? stj::dsl::ProbeKind::Mrs
                          : probe == "rps" ? stj::dsl::ProbeKind::Rps
                                           : stj::dsl::ProbeKind::Rrs;
                if (!deltas.empty()) q.deltas = parse_list(deltas);
                if (!base.empty()) q.base = parse_list(base);
                if (rounds >= 0) q.rounds = rounds;
            }
            prog = inline_program(f_expr, g_expr, std::move(q));
        }
        emit(stj::session::run(prog, opt), g.format);
        return 0;
    } catch (const stj::diagnostic_error& e) {
        const auto& d = e.diagnostic();
        std::cerr << "error[E_PARSE] line " << d.line << " col " << d.column << ": " << d.message
                  << "\n";
        return 2;
    } catch (const stj::error& e) {
        std::cerr << "error[" << e.code() << "] " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error[E_INTERNAL] " << e.what() << "\n";
        return 3;
    }
}
