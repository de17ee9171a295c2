#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "grosswald/bounds.hpp"
#include "grosswald/errors.hpp"
#include "grosswald/proots.hpp"
#include "grosswald/report.hpp"
#include "grosswald/search.hpp"

namespace {

using grosswald::Integer;
using grosswald::Json;
using grosswald::RunReport;

std::chrono::steady_clock::time_point now() {
    return std::chrono::steady_clock::now();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(now() - t0).count();
}

void finish(RunReport& report, std::chrono::steady_clock::time_point t0) {
    report.timing_seconds = seconds_since(t0);
    std::cout << to_json(report).dump() << "\n";
    std::fprintf(stderr, "%s: %.3f s\n", report.command.c_str(), report.timing_seconds);
}

Integer parse_integer(const std::string& text) {
    try {
        return Integer(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a decimal integer: " + text);
    }
}

int run_table1() {
    const auto t0 = now();
    // Reference constants the computation is expected to reproduce.
    static constexpr struct {
        int exp10;
        double reference;
    } kRows[] = {
        {2, 2.1127},  {4, 1.6821},  {6, 1.5556},  {8, 1.4960},  {10, 1.4614},
        {12, 1.4389}, {14, 1.4231}, {16, 1.4114}, {18, 1.4023}, {20, 1.3952},
    };
    RunReport report;
    report.command = "table1";
    report.inputs = Json::object();
    Json rows = Json::array();
    for (const auto& row : kRows) {
        const long double c = grosswald::table1_constant(powl(10.0L, row.exp10));
        Json j;
        j["p0"] = "1" + std::string(static_cast<std::size_t>(row.exp10), '0');
        j["C"] = static_cast<double>(c);
        j["reference"] = row.reference;
        j["difference"] = std::fabs(static_cast<double>(c) - row.reference);
        rows.push_back(std::move(j));
    }
    report.results = Json{{"rows", std::move(rows)}};
    report.assumptions = grosswald::Assumptions::unconditional;
    finish(report, t0);
    return 0;
}

int run_shrink() {
    const auto t0 = now();
    constexpr long double kStart = 1e49L;
    const grosswald::ShrinkResult res = grosswald::shrink_fixpoint(kStart);
    RunReport report;
    report.command = "shrink";
    report.inputs = Json{{"start", static_cast<double>(kStart)}};
    Json chain = Json::array();
    for (const auto& step : res.chain)
        chain.push_back(Json{{"p_max", static_cast<double>(step.p_max)},
                             {"omega_max", step.omega_max}});
    report.results = Json{{"chain", std::move(chain)},
                          {"final_p_max", static_cast<double>(res.final_p_max)},
                          {"final_omega_max", res.final_omega_max}};
    report.assumptions = grosswald::Assumptions::grh_conditional;
    finish(report, t0);
    return 0;
}

int run_search(unsigned n, const std::string& floor_text, std::uint64_t cap,
               std::string out_path, unsigned threads) {
    const auto t0 = now();
    grosswald::SearchConfig config;
    config.floor = parse_integer(floor_text);
    config.enum_cap = cap;
    config.threads = threads;
    if (out_path.empty()) out_path = "exceptions_n" + std::to_string(n) + ".jsonl";

    const grosswald::CaseReport rep = grosswald::run_case(n, config);

    for (const auto& line : rep.lines) std::cout << to_json(line).dump() << "\n";

    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    for (const auto& rec : rep.exceptions) out << to_json(rec).dump() << "\n";
    out.close();

    std::size_t failing = 0;
    for (const auto& rec : rep.exceptions)
        if (rec.report && !rec.report->passes_g_hat) ++failing;

    RunReport report;
    report.command = "search";
    report.inputs = Json{{"n", n},
                         {"floor", floor_text},
                         {"cap", cap},
                         {"out", out_path},
                         {"threads", threads}};
    report.results = Json{{"cases", rep.lines.size()},
                          {"exceptions", rep.exceptions.size()},
                          {"failing_g_hat", failing},
                          {"verdict_holds", rep.verdict_holds},
                          {"out", out_path}};
    report.assumptions = rep.assumptions;
    finish(report, t0);
    return rep.verdict_holds ? 0 : 1;
}

int run_verify(const std::string& from_text, const std::string& to_text, const std::string& mode,
               unsigned threads) {
    const auto t0 = now();
    const Integer from = parse_integer(from_text);
    const Integer to = parse_integer(to_text);
    const grosswald::RootMode root_mode =
        mode == "g" ? grosswald::RootMode::g : grosswald::RootMode::g_hat;
    grosswald::VerifyConfig config;
    config.threads = threads;
    if (to > config.cap) config.cap = to;

    const std::vector<Integer> failures = grosswald::verify_range(from, to, root_mode, config);

    RunReport report;
    report.command = "verify";
    report.inputs = Json{{"from", from_text}, {"to", to_text}, {"mode", mode}, {"threads", threads}};
    Json list = Json::array();
    for (const Integer& p : failures) list.push_back(grosswald::decimal(p));
    report.results = Json{{"count", failures.size()}, {"failures", std::move(list)}};
    report.assumptions = grosswald::Assumptions::unconditional;
    finish(report, t0);
    return failures.empty() ? 0 : 1;
}

int run_check(const std::string& p_text) {
    const auto t0 = now();
    const Integer p = parse_integer(p_text);
    const grosswald::RootReport root = grosswald::grosswald_check(p);

    RunReport report;
    report.command = "check";
    report.inputs = Json{{"p", p_text}};
    report.results = to_json(root);
    report.assumptions = grosswald::Assumptions::unconditional;
    finish(report, t0);

    const bool counterexample = (p > 409 && !root.passes_g) || (p > 2791 && !root.passes_g_hat);
    return counterexample ? 1 : 0;
}

int run_bounds_c(long double p, long double x) {
    const auto t0 = now();
    const long double value = grosswald::bach_c(p, x);
    RunReport report;
    report.command = "bounds c";
    report.inputs = Json{{"p", static_cast<double>(p)}, {"x", static_cast<double>(x)}};
    report.results = Json{{"value", static_cast<double>(value)}};
    report.assumptions = grosswald::Assumptions::unconditional;
    finish(report, t0);
    return 0;
}

int run_bounds_ankeny(long double p, unsigned omega) {
    const auto t0 = now();
    const grosswald::BoundEvaluation eval = grosswald::ankeny_bound(p, omega);
    RunReport report;
    report.command = "bounds ankeny";
    report.inputs = Json{{"p", static_cast<double>(p)}, {"omega", omega}};
    report.results = Json{{"value", static_cast<double>(eval.value)}};
    report.assumptions = eval.assumptions;
    finish(report, t0);
    return 0;
}

int run_bounds_sieve(long double p, long double x, unsigned n, unsigned s, long double delta) {
    const auto t0 = now();
    const grosswald::BoundEvaluation eval = grosswald::sieve_bound(p, x, n, s, delta);
    RunReport report;
    report.command = "bounds sieve";
    report.inputs = Json{{"p", static_cast<double>(p)},
                         {"x", static_cast<double>(x)},
                         {"n", n},
                         {"s", s},
                         {"delta", static_cast<double>(delta)}};
    report.results = Json{{"value", static_cast<double>(eval.value)}};
    report.assumptions = eval.assumptions;
    finish(report, t0);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grosswald least-primitive-root conjecture toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;

    app.add_subcommand("table1", "Reproduce the C(p0) constant table")
        ->callback([&] { exit_code = run_table1(); });

    app.add_subcommand("shrink", "Shrink the admissible (p, omega) region to its fixpoint")
        ->callback([&] { exit_code = run_shrink(); });

    {
        auto* sc = app.add_subcommand("search", "Run the case search for one n");
        auto n = std::make_shared<unsigned>(0);
        auto floor_text = std::make_shared<std::string>("2000000000000000");
        auto cap = std::make_shared<std::uint64_t>(1'000'000);
        auto out = std::make_shared<std::string>();
        auto threads = std::make_shared<unsigned>(0);
        sc->add_option("--n", *n, "target number of distinct prime factors of p - 1")
            ->required()
            ->check(CLI::Range(2u, 1000u));
        sc->add_option("--floor", *floor_text, "lower bound already verified elsewhere");
        sc->add_option("--cap", *cap, "enumeration cap per case");
        sc->add_option("--out", *out, "exceptions file (default exceptions_n<N>.jsonl)");
        sc->add_option("--threads", *threads, "worker threads (0 = automatic)");
        sc->callback([=, &exit_code] {
            exit_code = run_search(*n, *floor_text, *cap, *out, *threads);
        });
    }

    {
        auto* sc = app.add_subcommand("verify", "Exhaustively verify primes in a range");
        auto from = std::make_shared<std::string>();
        auto to = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>();
        auto threads = std::make_shared<unsigned>(0);
        sc->add_option("--from", *from, "exclusive lower end")->required();
        sc->add_option("--to", *to, "inclusive upper end")->required();
        sc->add_option("--mode", *mode, "g (least primitive root) or ghat (least prime one)")
            ->required()
            ->check(CLI::IsMember({"g", "ghat"}));
        sc->add_option("--threads", *threads, "worker threads (0 = automatic)");
        sc->callback([=, &exit_code] {
            exit_code = run_verify(*from, *to, *mode, *threads);
        });
    }

    {
        auto* sc = app.add_subcommand("check", "Report both least roots of one odd prime");
        auto p = std::make_shared<std::string>();
        sc->add_option("--p", *p, "odd prime, decimal")->required();
        sc->callback([=, &exit_code] { exit_code = run_check(*p); });
    }

    {
        auto* sc = app.add_subcommand("bounds", "Evaluate the explicit bound formulas");
        sc->require_subcommand(1);
        {
            auto* c = sc->add_subcommand("c", "character-sum constant c(p, x)");
            auto p = std::make_shared<long double>(0);
            auto x = std::make_shared<long double>(0);
            c->add_option("--p", *p)->required();
            c->add_option("--x", *x)->required();
            c->callback([=, &exit_code] { exit_code = run_bounds_c(*p, *x); });
        }
        {
            auto* a = sc->add_subcommand("ankeny", "sieve-free least-prime-root bound");
            auto p = std::make_shared<long double>(0);
            auto omega = std::make_shared<unsigned>(1);
            a->add_option("--p", *p)->required();
            a->add_option("--omega", *omega)->required();
            a->callback([=, &exit_code] { exit_code = run_bounds_ankeny(*p, *omega); });
        }
        {
            auto* s = sc->add_subcommand("sieve", "sieved least-prime-root bound");
            auto p = std::make_shared<long double>(0);
            auto x = std::make_shared<long double>(0);
            auto n = std::make_shared<unsigned>(0);
            auto sv = std::make_shared<unsigned>(0);
            auto delta = std::make_shared<long double>(0);
            s->add_option("--p", *p)->required();
            s->add_option("--x", *x)->required();
            s->add_option("--n", *n)->required();
            s->add_option("--s", *sv)->required();
            s->add_option("--delta", *delta)->required();
            s->callback([=, &exit_code] {
                exit_code = run_bounds_sieve(*p, *x, *n, *sv, *delta);
            });
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const grosswald::out_of_theorem_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const grosswald::invalid_start& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const grosswald::error& e) {
        // unbounded case, enumeration/factoring/recursion caps
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return exit_code;
}
