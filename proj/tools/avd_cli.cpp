// Command line front door: instance generation, colouring runs,
// verification and oracle queries.
//
// Exit codes: 0 success, 1 colouring failure, 2 invalid input.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "avd/avd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitColouringFailure = 1;
constexpr int kExitInvalidInput = 2;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
    } else {
        avd::write_file(out_path, content);
    }
}

avd::ProfileSpec load_profile_spec(const std::string& arg) {
    if (arg == "desk" || arg == "paper") return avd::ProfileSpec::named(arg);
    return avd::ProfileSpec::from_json(avd::parse_json(avd::read_file(arg), "profile"));
}

avd::ListAssignment parse_lists_file(const std::string& path, const avd::MultiGraph& g) {
    const auto j = avd::parse_json(avd::read_file(path), "lists");
    if (j.is_object() && j.contains("lists")) {
        auto inst = avd::instance_from_json(j);
        if (inst.graph.edge_count() != g.edge_count()) {
            throw avd::InvalidInput("lists file describes a different number of edges");
        }
        return inst.lists;
    }
    if (!j.is_object()) throw avd::InvalidInput("lists file: expected a JSON object");
    avd::ListAssignment lists(g.edge_count());
    for (const auto& [key, val] : j.items()) {
        const int e = avd::parse_id_key(key, "lists");
        g.check_edge(e);
        lists.set_list(e, val.get<std::vector<avd::colour_t>>());
    }
    return lists;
}

struct GenArgs {
    std::string family;
    int n = 0, m = 0, a = 0, b = 0, d = 0;
    int list_size = 0;
    int universe = 0;
    std::uint64_t seed = 0;
    std::string out = "-";
    bool total = false;
    bool connected = false;
};

int run_gen(const GenArgs& args) {
    avd::Rng rng(avd::Rng::derive(args.seed, 0xA0));
    avd::MultiGraph g;
    if (args.family == "path") {
        g = avd::gen_path(args.n);
    } else if (args.family == "cycle") {
        g = avd::gen_cycle(args.n);
    } else if (args.family == "complete") {
        g = avd::gen_complete(args.n);
    } else if (args.family == "complete-bipartite") {
        g = avd::gen_complete_bipartite(args.a, args.b);
    } else if (args.family == "random-gnm") {
        g = avd::gen_random_gnm(args.n, args.m, rng, args.connected);
    } else if (args.family == "random-near-regular") {
        g = avd::gen_random_near_regular(args.n, args.d, rng);
    } else {
        throw avd::InvalidInput("unknown family: " + args.family);
    }
    avd::require_no_isolated_edges(g);

    avd::Instance inst;
    inst.graph = g;
    inst.lists = avd::ListAssignment(g.edge_count());
    if (args.list_size > 0) {
        const int universe = args.universe > 0 ? args.universe : 8 * std::max(1, g.max_degree());
        inst.lists = avd::gen_random_lists(g.edge_count(), args.list_size, universe, rng);
        if (args.total) {
            inst.vertex_lists = avd::gen_random_vertex_lists(g.vertex_count(), args.list_size,
                                                             universe, rng);
        }
    } else if (args.total) {
        throw avd::InvalidInput("--total generation needs --list-size");
    }
    emit(args.out, avd::canonical_dump(avd::instance_to_json(inst)));
    return kExitOk;
}

struct ColourArgs {
    std::string instance_path;
    std::uint64_t seed = 0;
    std::string profile = "desk";
    std::optional<std::int64_t> max_resample;
    std::string stats_path;
    std::string dump_log_path;
    std::string out = "-";
    std::string route = "auto";
    std::string format = "json";
    int max_doublings = 12;
    bool total = false;
};

std::string colouring_text(const avd::PartialColouring& c) {
    std::string out;
    for (int e = 0; e < c.edge_count(); ++e) {
        out += std::to_string(e);
        out += ' ';
        out += c.is_coloured(e) ? std::to_string(c.colour(e)) : std::string("-");
        out += '\n';
    }
    return out;
}

int run_colour(const ColourArgs& args) {
    const avd::Instance inst = avd::load_instance(args.instance_path);
    const avd::MultiGraph& g = inst.graph;

    avd::ProfileSpec spec = load_profile_spec(args.profile);
    if (args.max_resample) spec.overrides["max_resample"] = *args.max_resample;

    avd::ThresholdProfile prof; // defaults suffice for edgeless graphs
    const int delta = g.max_degree();
    const int list_size = std::max(1, inst.lists.min_size());
    if (delta >= 2) prof = spec.resolve(delta, list_size);

    avd::PipelineOptions options;
    options.max_doublings = args.max_doublings;
    if (args.route == "greedy") options.route = avd::Route::Greedy;
    else if (args.route == "pipeline") options.route = avd::Route::Pipeline;
    else if (args.route == "auto") options.route = avd::Route::Auto;
    else throw avd::InvalidInput("unknown route: " + args.route);

    avd::RunStats stats;
    stats.input_hash = avd::instance_hash(inst);
    stats.seed = args.seed;
    stats.profile = prof.to_json();

    auto finish_stats = [&]() {
        if (!args.stats_path.empty()) {
            emit(args.stats_path, avd::canonical_dump(stats.to_json()));
        }
        if (!args.dump_log_path.empty()) {
            emit(args.dump_log_path,
                 avd::canonical_dump(stats.reduction_log.is_null() ? nlohmann::json::object()
                                                                   : stats.reduction_log));
        }
    };

    try {
        if (args.total) {
            if (!inst.has_vertex_lists()) {
                throw avd::InvalidInput("--total needs vertex_lists in the instance file");
            }
            avd::TotalLists lists{inst.vertex_lists, inst.lists};
            const avd::TotalColouring tc =
                avd::avd_list_total_colour(g, lists, prof, args.seed, options, &stats);
            finish_stats();
            emit(args.out, avd::canonical_dump(tc.to_json()));
        } else {
            for (int e = 0; e < g.edge_count(); ++e) {
                if (inst.lists.list(e).empty()) {
                    throw avd::InvalidInput("instance has no list for edge " + std::to_string(e));
                }
            }
            const avd::PartialColouring c =
                avd::avd_list_edge_colour(g, inst.lists, prof, args.seed, options, &stats);
            finish_stats();
            if (args.format == "text") {
                emit(args.out, colouring_text(c));
            } else {
                emit(args.out, avd::canonical_dump(avd::colouring_to_json(c, true)));
            }
        }
    } catch (const avd::InvalidInput&) {
        throw;
    } catch (const avd::Error& err) {
        stats.stage_error = err.what();
        finish_stats();
        std::cerr << "colouring failed: " << err.what() << "\n";
        return kExitColouringFailure;
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string graph_path;
    std::string lists_path;
    std::string colouring_path;
    std::string format = "json";
    bool total = false;
};

int run_verify(const VerifyArgs& args) {
    const avd::Instance inst = avd::load_instance(args.graph_path);
    const avd::MultiGraph& g = inst.graph;
    avd::Instance lists_inst;
    const avd::ListAssignment lists = parse_lists_file(args.lists_path, g);
    const auto cj = avd::parse_json(avd::read_file(args.colouring_path), "colouring");

    if (args.total) {
        const avd::Instance lists_full = avd::load_instance(args.lists_path);
        if (!lists_full.has_vertex_lists()) {
            throw avd::InvalidInput("total verification needs vertex_lists in the lists file");
        }
        avd::TotalLists tl{lists_full.vertex_lists, lists};
        avd::TotalColouring tc;
        tc.edge_colours = avd::colouring_from_json(cj, g.edge_count());
        if (!cj.contains("vertices")) throw avd::InvalidInput("total colouring: missing 'vertices'");
        tc.vertex_colours.assign(static_cast<std::size_t>(g.vertex_count()), -1);
        for (const auto& [key, val] : cj.at("vertices").items()) {
            const int v = avd::parse_id_key(key, "total colouring vertices");
            g.check_vertex(v);
            tc.vertex_colours[static_cast<std::size_t>(v)] = val.get<avd::colour_t>();
        }
        const avd::TotalVerifyReport rep = avd::verify_total(g, tl, tc);
        if (args.format == "text") {
            std::cout << (rep.empty() ? "OK\n" : "VIOLATIONS\n");
        } else {
            std::cout << avd::canonical_dump(rep.to_json());
        }
        return rep.empty() ? kExitOk : kExitColouringFailure;
    }

    const avd::PartialColouring c = avd::colouring_from_json(cj, g.edge_count());
    const avd::VerifyReport rep = avd::verify(g, lists, c);
    if (args.format == "text") {
        std::cout << (rep.empty() ? "OK\n" : "VIOLATIONS\n");
    } else {
        std::cout << avd::canonical_dump(avd::report_to_json(rep));
    }
    return rep.empty() ? kExitOk : kExitColouringFailure;
}

struct OracleArgs {
    std::string graph_path;
    int k_max = 0;
    int edge_cap = 12;
    std::vector<int> choosability;
};

int run_oracle(const OracleArgs& args) {
    const avd::Instance inst = avd::load_instance(args.graph_path);
    const avd::MultiGraph& g = inst.graph;
    const int k_max = args.k_max > 0 ? args.k_max : g.max_degree() + 3;
    nlohmann::json j;
    j["graph_hash"] = avd::hash_hex(avd::graph_to_text(g));
    j["k_max"] = k_max;
    j["chi_a_prime"] = avd::chromatic_avd_index(g, k_max, args.edge_cap);
    nlohmann::json ch = nlohmann::json::object();
    for (int k : args.choosability) {
        const auto [ok, witness] = avd::check_choosability(g, k);
        nlohmann::json entry;
        entry["choosable"] = ok;
        if (witness) {
            nlohmann::json w = nlohmann::json::object();
            for (int e = 0; e < witness->edge_count(); ++e) {
                w[std::to_string(e)] = witness->list(e);
            }
            entry["witness"] = std::move(w);
        }
        ch[std::to_string(k)] = std::move(entry);
    }
    j["choosability"] = std::move(ch);
    std::cout << avd::canonical_dump(j);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adjacent vertex distinguishing list edge/total colouring toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "generate a graph + lists instance");
    cmd_gen->add_option("--family,-f", gen.family,
                        "path|cycle|complete|complete-bipartite|random-gnm|random-near-regular")
        ->required();
    cmd_gen->add_option("--n", gen.n, "vertex count");
    cmd_gen->add_option("--m", gen.m, "edge count (random-gnm)");
    cmd_gen->add_option("--a", gen.a, "left side size (complete-bipartite)");
    cmd_gen->add_option("--b", gen.b, "right side size (complete-bipartite)");
    cmd_gen->add_option("--d", gen.d, "degree (random-near-regular)");
    cmd_gen->add_option("--list-size", gen.list_size, "per-edge list size (0 = no lists)");
    cmd_gen->add_option("--universe", gen.universe, "colour universe size (0 = 8*Delta)");
    cmd_gen->add_option("--seed", gen.seed, "rng seed")->required();
    cmd_gen->add_option("--out,-o", gen.out, "output file ('-' = stdout)");
    cmd_gen->add_flag("--total", gen.total, "also generate vertex lists");
    cmd_gen->add_flag("--connected", gen.connected, "regenerate until connected (random-gnm)");

    ColourArgs col;
    auto* cmd_colour = app.add_subcommand("colour", "construct an AVD colouring");
    cmd_colour->add_option("instance", col.instance_path, "instance file (json)")->required();
    cmd_colour->add_option("--seed", col.seed, "rng seed")->required();
    cmd_colour->add_option("--profile", col.profile, "desk | paper | profile file");
    cmd_colour->add_option("--max-resample", col.max_resample, "resampling budget override");
    cmd_colour->add_option("--stats", col.stats_path, "write run record json");
    cmd_colour->add_option("--dump-log", col.dump_log_path, "write reduction log json");
    cmd_colour->add_option("--out,-o", col.out, "output file ('-' = stdout)");
    cmd_colour->add_option("--route", col.route, "auto | greedy | pipeline");
    cmd_colour->add_option("--format", col.format, "json | text");
    cmd_colour->add_option("--max-doublings", col.max_doublings, "doubling budget");
    cmd_colour->add_flag("--total", col.total, "total colouring");

    VerifyArgs ver;
    auto* cmd_verify = app.add_subcommand("verify", "verify a colouring");
    cmd_verify->add_option("graph", ver.graph_path, "graph file (json or text)")->required();
    cmd_verify->add_option("lists", ver.lists_path, "lists file (instance json or bare map)")->required();
    cmd_verify->add_option("colouring", ver.colouring_path, "colouring file (json)")->required();
    cmd_verify->add_option("--format", ver.format, "json | text");
    cmd_verify->add_flag("--total", ver.total, "verify a total colouring");

    OracleArgs ora;
    auto* cmd_oracle = app.add_subcommand("oracle", "exact brute-force queries");
    cmd_oracle->add_option("graph", ora.graph_path, "graph file (json or text)")->required();
    cmd_oracle->add_option("--k-max", ora.k_max, "largest k to try (0 = Delta+3)");
    cmd_oracle->add_option("--edge-cap", ora.edge_cap, "search cap on |E|");
    cmd_oracle->add_option("--choosability", ora.choosability, "k values to decide choosability for");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_gen->parsed()) return run_gen(gen);
        if (cmd_colour->parsed()) return run_colour(col);
        if (cmd_verify->parsed()) return run_verify(ver);
        if (cmd_oracle->parsed()) return run_oracle(ora);
    } catch (const avd::InvalidInput& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return kExitInvalidInput;
    } catch (const avd::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitColouringFailure;
    } catch (const std::exception& err) {
        std::cerr << "unexpected error: " << err.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
