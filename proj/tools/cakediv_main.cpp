#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cakediv/algo1.hpp"
#include "cakediv/algo2.hpp"
#include "cakediv/errors.hpp"
#include "cakediv/infinite.hpp"
#include "cakediv/instance_io.hpp"
#include "cakediv/proportional.hpp"
#include "cakediv/strong.hpp"

namespace {

using namespace cakediv;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

void write_json(const nlohmann::json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io_error, "cannot write " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json trace_to_json(const Algo2Trace& trace) {
    nlohmann::json rounds = nlohmann::json::array();
    for (const RoundRecord& r : trace.rounds) {
        nlohmann::json pieces = nlohmann::json::array();
        for (const Piece& p : r.pieces) pieces.push_back(piece_to_json(p));
        rounds.push_back({{"m", r.m},
                          {"unsatisfied", r.unsatisfied},
                          {"improved", r.improved},
                          {"alloc_value", r.alloc_value},
                          {"remainder_value", r.remainder_value},
                          {"pieces", pieces},
                          {"remainder", piece_to_json(r.remainder)},
                          {"cutter", r.cutter},
                          {"receiver", r.receiver},
                          {"ratio", r.ratio},
                          {"slice", piece_to_json(r.slice)},
                          {"evals", r.evals},
                          {"cuts", r.cuts}});
    }
    return {{"rounds", rounds},
            {"final_player", trace.final_player},
            {"final_remainder", piece_to_json(trace.final_remainder)}};
}

PlayerStream parse_stream_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                fail(ErrorKind::io_error, "stream parameter '" + item + "' is not key=value");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }

    PlayerStream stream = [&]() {
        if (kind == "geometric") {
            double r = kv.count("r") ? std::stod(kv["r"]) : 0.5;
            return PlayerStream::geometric(r);
        }
        if (kind == "zeta") {
            double s = kv.count("s") ? std::stod(kv["s"]) : 2.0;
            return PlayerStream::zeta(s);
        }
        if (kind == "custom") {
            if (!kv.count("prefix"))
                fail(ErrorKind::io_error, "custom stream needs prefix=t0+t1+...");
            std::vector<double> prefix;
            std::stringstream ps(kv["prefix"]);
            std::string tok;
            while (std::getline(ps, tok, '+')) prefix.push_back(std::stod(tok));
            double r = kv.count("r") ? std::stod(kv["r"]) : 0.5;
            return PlayerStream::custom(std::move(prefix), r);
        }
        fail(ErrorKind::io_error, "unknown stream kind: " + kind);
    }();

    if (kv.count("vals") && kv["vals"] == "random") {
        std::uint64_t seed = kv.count("seed") ? std::stoull(kv["seed"]) : 1;
        std::size_t bp = kv.count("breakpoints") ? std::stoul(kv["breakpoints"]) : 8;
        stream = stream.with_random_valuations(seed, bp);
    }
    return stream;
}

int cmd_solve(const std::string& algo, const std::string& in_path, const std::string& out_path,
              const std::string& trace_path, std::size_t max_rounds, const std::string& inner,
              std::size_t depth, bool strict, const std::string& stream_spec) {
    if (algo == "infinite") {
        PlayerStream stream = parse_stream_spec(stream_spec);
        QueryLedger ledger(depth + 1);
        InfiniteResult res = truncated_infinite_division(stream, depth, strict, ledger);
        nlohmann::json rows = nlohmann::json::array();
        for (const CertificateRow& r : res.certificate) {
            rows.push_back({{"player", r.player},
                            {"entitlement", r.entitlement},
                            {"scaled", r.scaled},
                            {"value", r.value},
                            {"slack", r.slack},
                            {"scale_margin", r.scale_margin},
                            {"strict_ok", r.strict_ok},
                            {"piece", piece_to_json(res.state.pieces[r.player])}});
        }
        write_json({{"format", 1},
                    {"algorithm", "infinite"},
                    {"stream", stream.description()},
                    {"depth", depth},
                    {"strict", strict},
                    {"players", rows},
                    {"queries", {{"evals", ledger.evals}, {"cuts", ledger.cuts}}}},
                   out_path);
        return kExitOk;
    }

    InstanceFile file = parse_instance(in_path);
    const Instance& inst = file.instance;
    const Piece cake = Piece::full();
    QueryLedger ledger(inst.size());
    nlohmann::json parameters;
    nlohmann::json trace_json;
    Allocation alloc;

    if (algo == "algo1") {
        Algo1Audit audit;
        alloc = algorithm_one(inst, cake, ledger, &audit);
        parameters = {{"rounds", audit.rounds}, {"delegated", audit.delegated}};
    } else if (algo == "algo2") {
        Algo2Result res = algorithm_two(inst, cake, ledger, max_rounds);
        alloc = std::move(res.allocation);
        parameters = {{"rounds", res.trace.rounds.size()},
                      {"max_rounds", max_rounds == 0 ? 10 * inst.size() * inst.size()
                                                     : max_rounds}};
        trace_json = trace_to_json(res.trace);
        if (!trace_path.empty()) write_json(trace_json, trace_path);
    } else if (algo == "cloning") {
        alloc = cloning_solve(inst, cake, ledger);
    } else if (algo == "strong") {
        FairDivider div = inner == "algo1" ? algo1_divider() : algo2_divider(max_rounds);
        alloc = strong_fair_division(inst, cake, div, ledger);
        parameters = {{"inner", inner}};
    } else {
        fail(ErrorKind::io_error, "unknown algorithm: " + algo);
    }

    if (!trace_path.empty() && algo != "algo2")
        fail(ErrorKind::io_error, "--trace is only recorded for algo2");

    bool strict_check = algo == "strong";
    Verdict verdict = verify_allocation(inst, alloc.pieces, strict_check, cake);
    nlohmann::json report = make_report(inst, alloc, verdict, algo, ledger, parameters,
                                        trace_path.empty() ? nlohmann::json() : trace_json);
    write_json(report, out_path);
    return verdict.ok() ? kExitOk : kExitViolation;
}

int cmd_verify(const std::string& in_path, const std::string& alloc_path, bool strict) {
    InstanceFile file = parse_instance(in_path);
    std::ifstream in(alloc_path);
    if (!in) fail(ErrorKind::io_error, "cannot open allocation file: " + alloc_path);
    nlohmann::json report;
    try {
        in >> report;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io_error, std::string("invalid JSON in ") + alloc_path + ": " + e.what());
    }
    std::vector<Piece> pieces = pieces_from_report(report);
    Verdict verdict = verify_allocation(file.instance, pieces, strict);
    std::cout << verdict.label() << " (min slack " << verdict.min_slack << ")\n";
    for (const std::string& msg : verdict.violations) std::cout << "  " << msg << "\n";
    return verdict.ok() ? kExitOk : kExitViolation;
}

int cmd_gen(std::size_t n, std::uint64_t seed, const std::string& mode_str,
            std::size_t breakpoints, std::uint64_t max_den, const std::string& out_path) {
    EntitlementMode mode = entitlement_mode_from_string(mode_str);
    InstanceFile file = generate_instance(n, seed, mode, breakpoints, max_den);
    write_json(emit_instance(file), out_path);
    return kExitOk;
}

int cmd_bench(const std::string& suite_dir, const std::string& out_path,
              const std::string& algos_csv) {
    std::vector<std::string> algos;
    std::stringstream ss(algos_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) algos.push_back(tok);

    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(suite_dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::ofstream csv(out_path);
    if (!csv) fail(ErrorKind::io_error, "cannot write " + out_path);
    csv << "seed,n,algo,rounds,evals,cuts,min_slack,wall_ms\n";

    for (const auto& path : files) {
        InstanceFile file = parse_instance(path.string());
        const Instance& inst = file.instance;
        for (const std::string& algo : algos) {
            if (algo == "cloning" && !inst.all_rational()) continue;
            QueryLedger ledger(inst.size());
            std::size_t rounds = 0;
            Allocation alloc;
            auto t0 = std::chrono::steady_clock::now();
            try {
                if (algo == "algo1") {
                    Algo1Audit audit;
                    alloc = algorithm_one(inst, Piece::full(), ledger, &audit);
                    rounds = audit.rounds;
                } else if (algo == "algo2") {
                    Algo2Result res = algorithm_two(inst, Piece::full(), ledger);
                    rounds = res.trace.rounds.size();
                    alloc = std::move(res.allocation);
                } else if (algo == "cloning") {
                    alloc = cloning_solve(inst, Piece::full(), ledger);
                    BigInt q = 1; // the clone protocol runs one round per exit
                    for (const auto& e : inst.exact)
                        q = boost::multiprecision::lcm(q, e->den());
                    rounds = static_cast<std::size_t>(q) - 1;
                } else if (algo == "strong") {
                    alloc = strong_fair_division(inst, Piece::full(), algo2_divider(), ledger);
                } else {
                    fail(ErrorKind::io_error, "unknown algorithm: " + algo);
                }
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::all_identical) continue; // strong needs a separation
                throw;
            }
            auto t1 = std::chrono::steady_clock::now();
            double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            Verdict verdict = verify_allocation(inst, alloc.pieces, false);
            csv << (file.seed ? std::to_string(*file.seed) : "-1") << ',' << inst.size() << ','
                << algo << ',' << rounds << ',' << ledger.total_evals() << ','
                << ledger.total_cuts() << ',' << verdict.min_slack << ',' << ms << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair cake division with unequal entitlements"};
    app.require_subcommand(1);

    std::string algo = "algo2", in_path, out_path, trace_path, inner = "algo2";
    std::string stream_spec = "geometric:r=0.5";
    std::size_t max_rounds = 0, depth = 8, gen_n = 2, breakpoints = 12;
    std::uint64_t seed = 1, max_den = 50;
    bool strict = false;
    std::string mode_str = "mixed", suite_dir, algos_csv = "algo1,algo2,cloning,strong";
    std::string alloc_path;

    auto* solve = app.add_subcommand("solve", "run a division algorithm on an instance");
    solve->add_option("--algo", algo, "algo1|algo2|cloning|strong|infinite")->required();
    solve->add_option("--in", in_path, "instance JSON (not used by infinite)");
    solve->add_option("--out", out_path, "report JSON path, '-' for stdout");
    solve->add_option("--trace", trace_path, "round trace JSON (algo2)");
    solve->add_option("--max-rounds", max_rounds, "round guard for algo2, 0 = 10*n^2");
    solve->add_option("--inner", inner, "inner solver for strong: algo1|algo2");
    solve->add_option("--depth", depth, "truncation depth for infinite");
    solve->add_flag("--strict", strict, "strong fairness (infinite mode)");
    solve->add_option("--stream", stream_spec,
                      "player stream, e.g. geometric:r=0.5 | zeta:s=2 | "
                      "custom:prefix=0.3+0.2,r=0.5 (append ,vals=random,seed=S)");

    auto* verify = app.add_subcommand("verify", "re-check a reported allocation");
    verify->add_option("--in", in_path, "instance JSON")->required();
    verify->add_option("--alloc", alloc_path, "report JSON with pieces")->required();
    verify->add_flag("--strict", strict, "require strictly positive slack");

    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--n", gen_n, "number of players")->required();
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_option("--mode", mode_str, "rational|irrational|mixed");
    gen->add_option("--breakpoints", breakpoints, "max interior breakpoints per valuation");
    gen->add_option("--max-den", max_den, "max denominator for rational entitlements");
    gen->add_option("--out", out_path, "output path, '-' for stdout");

    auto* bench = app.add_subcommand("bench", "run a suite directory and emit CSV");
    bench->add_option("--suite", suite_dir, "directory of instance JSON files")->required();
    bench->add_option("--out", out_path, "CSV output path")->required();
    bench->add_option("--algos", algos_csv, "comma-separated algorithm list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            if (algo != "infinite" && in_path.empty())
                fail(ErrorKind::io_error, "solve needs --in for instance-based algorithms");
            return cmd_solve(algo, in_path, out_path, trace_path, max_rounds, inner, depth,
                             strict, stream_spec);
        }
        if (verify->parsed()) return cmd_verify(in_path, alloc_path, strict);
        if (gen->parsed()) return cmd_gen(gen_n, seed, mode_str, breakpoints, max_den, out_path);
        if (bench->parsed()) return cmd_bench(suite_dir, out_path, algos_csv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_input_error() ? kExitInput : kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
