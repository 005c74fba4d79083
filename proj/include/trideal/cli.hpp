#pragma once
// Batch front door: parse one subcommand, run the engine, emit one
// deterministic JSON report.  Timing is segregated in timing_ms so result
// payloads stay byte-identical across runs.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trideal/io.hpp"
#include "trideal/trace.hpp"

namespace trideal {

struct RunOutcome {
    Json report;
    int exit_code = 0;
};

namespace cli_detail {

inline std::string error_kind(const Error& e) {
    if (dynamic_cast<const SearchCapError*>(&e)) return "search_cap";
    if (dynamic_cast<const UndeterminedError*>(&e)) return "undetermined";
    if (dynamic_cast<const InputError*>(&e)) return "input";
    if (dynamic_cast<const AxiomViolation*>(&e)) return "axiom";
    if (dynamic_cast<const CapError*>(&e)) return "cap";
    if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
    if (dynamic_cast<const SolveError*>(&e)) return "solve";
    return "error";
}

inline int error_exit_code(const Error& e) {
    if (dynamic_cast<const SearchCapError*>(&e)) return 3;
    if (dynamic_cast<const UndeterminedError*>(&e)) return 3;
    return 2;
}

inline Json read_json_input(const std::string& path) {
    if (path == "-") {
        Json j;
        try {
            std::cin >> j;
        } catch (const std::exception& e) {
            throw InputError(std::string("invalid JSON on stdin: ") + e.what());
        }
        return j;
    }
    return load_json_file(path);
}

/// Accepts a bare telescope object or a whole report wrapping one.
inline Json unwrap_telescope(const Json& j) {
    if (j.is_object() && j.contains("result") && j.at("result").contains("telescope"))
        return j.at("result").at("telescope");
    if (j.is_object() && j.contains("telescope")) return j.at("telescope");
    return j;
}

inline std::string fg_status_name(FgStatus s) {
    switch (s) {
        case FgStatus::FinitelyGenerated: return "finitely_generated";
        case FgStatus::NotFinitelyGenerated: return "not_finitely_generated";
        default: return "undetermined";
    }
}

inline Json fg_to_json(const FgResult& fg) {
    Json j;
    j["status"] = fg_status_name(fg.status);
    j["stage"] = fg.stage;
    j["dead_at"] = fg.dead_at;
    j["witness_stage"] = fg.witness_stage;
    j["witness_column"] = fg.witness_column;
    j["rule"] = fg.rule;
    return j;
}

inline Json cert_report_json(const CertificateReport& rep) {
    return Json{{"checked", rep.checked}, {"failed", rep.failed},
                {"all_ok", rep.all_ok()}};
}

struct Ctx {
    Json inputs = Json::object();
    Json result = Json::object();
    Json certificates = Json::array();
};

inline Json strip_timing(Json j) {
    j.erase("timing_ms");
    return j;
}

}  // namespace cli_detail

inline RunOutcome dispatch(const std::vector<std::string>& args);

namespace cli_detail {

inline void run_corpus(const std::string& manifest_path, Ctx& ctx, int& failures) {
    Json man = load_json_file(manifest_path);
    const std::string dir =
        std::filesystem::path(manifest_path).parent_path().string();
    auto resolve = [&](std::string s) {
        const std::string token = "$DIR";
        for (std::size_t p = s.find(token); p != std::string::npos; p = s.find(token))
            s.replace(p, token.size(), dir.empty() ? "." : dir);
        return s;
    };
    ctx.inputs["manifest"] = man;
    Json rows = Json::array();
    failures = 0;
    for (const Json& sc : man.value("scenarios", Json::array())) {
        const std::string name = sc.at("name").get<std::string>();
        std::vector<std::string> argv;
        for (const Json& a : sc.at("argv")) argv.push_back(resolve(a.get<std::string>()));
        RunOutcome sub = dispatch(argv);
        // the command echo and input paths depend on where the manifest
        // lives, so goldens pin only the deterministic payload
        auto comparable = [](const Json& j) {
            return Json{{"certificates", j.value("certificates", Json::array())},
                        {"result", j.at("result")}};
        };
        Json got = sub.report.contains("result")
                       ? comparable(sub.report)
                       : Json{{"error", strip_timing(sub.report)}};
        std::string gpath = sc.at("golden").get<std::string>();
        if (gpath.find("$DIR") != std::string::npos) gpath = resolve(gpath);
        else if (!gpath.empty() && gpath[0] != '/' && !dir.empty()) gpath = dir + "/" + gpath;
        Json gfile = load_json_file(gpath);
        if (!gfile.contains("result"))
            throw InputError("golden file lacks a result payload: " + gpath);
        Json want = comparable(gfile);
        Json row{{"name", name}, {"ok", got == want}};
        if (got != want) {
            ++failures;
            row["diff"] = Json{{"expected", want}, {"got", got}};
        }
        rows.push_back(std::move(row));
    }
    ctx.result["scenarios"] = rows;
    ctx.result["failures"] = failures;
}

inline void build_app(CLI::App& app, Ctx& ctx, int& extra_exit) {
    app.require_subcommand(1);

    struct Flags {
        std::string ring, side = "two_sided", filter = "all", gens, links, ideal;
        std::string file = "-", chain, sequence, alpha, rows, mods, x, manifest;
        int depth = 6, k = 0, dim = 0;
        long long cap = 64;
        long long mcap = 2000000;
    };
    auto fl = std::make_shared<Flags>();

    CLI::App* ring_cmd = app.add_subcommand("ring", "ring registry and specs");
    ring_cmd->require_subcommand(1);
    CLI::App* ring_show = ring_cmd->add_subcommand("show", "canonical ring spec");
    ring_show->add_option("--ring", fl->ring, "preset name or spec file")->required();
    ring_show->callback([fl, &ctx] {
        RingBox box = ring_from_name(fl->ring);
        ctx.inputs["ring"] = box.spec;
        ctx.result["name"] = box.label;
        ctx.result["size"] = box.ring->size();
        ctx.result["commutative"] = box.ring->commutative();
        ctx.result["spec"] = ring_to_json(*box.ring);
    });

    CLI::App* ideal_cmd = app.add_subcommand("ideal", "ideal census");
    ideal_cmd->require_subcommand(1);
    CLI::App* ideal_list = ideal_cmd->add_subcommand("list", "enumerate ideals");
    ideal_list->add_option("--ring", fl->ring)->required();
    ideal_list->add_option("--side", fl->side, "left|right|two_sided");
    ideal_list->add_option("--filter", fl->filter, "all|idempotent|trace");
    ideal_list->add_option("--cap", fl->cap, "census size cap");
    ideal_list->callback([fl, &ctx] {
        RingBox box = ring_from_name(fl->ring);
        Side side = side_from_string(fl->side);
        if (fl->filter != "all" && fl->filter != "idempotent" && fl->filter != "trace")
            throw InputError("unknown filter: " + fl->filter);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["side"] = fl->side;
        ctx.inputs["filter"] = fl->filter;
        Json rows = Json::array();
        for (const Ideal& I : enumerate_ideals(*box.ring, side,
                                               static_cast<int>(fl->cap))) {
            bool idem = is_idempotent_ideal(I);
            bool trace = false;
            if (side == Side::TwoSided)
                trace = is_trace_ideal(*box.ring, I).is_trace;
            if (fl->filter == "idempotent" && !idem) continue;
            if (fl->filter == "trace" && !trace) continue;
            Json row = ideal_summary(I);
            row["idempotent"] = idem;
            if (side == Side::TwoSided) row["trace"] = trace;
            rows.push_back(std::move(row));
        }
        ctx.result["ideals"] = rows;
        ctx.result["count"] = rows.size();
    });

    CLI::App* trace_cmd = app.add_subcommand("trace", "trace ideal decisions");
    trace_cmd->require_subcommand(1);
    CLI::App* trace_decide = trace_cmd->add_subcommand("decide", "is the ideal a trace ideal");
    trace_decide->add_option("--ring", fl->ring)->required();
    trace_decide->add_option("--gens", fl->gens, "two-sided generators, comma separated")
        ->required();
    trace_decide->callback([fl, &ctx] {
        RingBox box = ring_from_name(fl->ring);
        Ideal I = make_ideal(*box.ring, parse_elem_list(fl->gens), Side::TwoSided);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["ideal"] = ideal_to_json(I);
        TraceDecision d = is_trace_ideal(*box.ring, I);
        ctx.result["is_trace"] = d.is_trace;
        ctx.result["scanned"] = d.scanned;
        if (d.witness) ctx.certificates.push_back(
            Json{{"kind", "trace_witness"}, {"ideal", ideal_summary(*d.witness)}});
    });
    CLI::App* trace_chain = trace_cmd->add_subcommand("chain-verify", "verify a pure chain");
    trace_chain->add_option("--ring", fl->ring)->required();
    trace_chain->add_option("--links", fl->links, "JSON array of left ideal literals")
        ->required();
    trace_chain->callback([fl, &ctx] {
        RingBox box = ring_from_name(fl->ring);
        Json arr = Json::parse(fl->links, nullptr, false);
        if (arr.is_discarded() || !arr.is_array())
            throw InputError("--links must be a JSON array of ideal literals");
        std::vector<Ideal> links;
        for (const Json& lit : arr) {
            Json fixed = lit;
            if (!fixed.contains("side")) fixed["side"] = "left";
            links.push_back(ideal_from_json(*box.ring, fixed));
        }
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["links"] = arr;
        ChainCert cert = verify_chain(*box.ring, links);
        ctx.result["ok"] = true;
        ctx.result["links"] = cert.links.size();
        ctx.result["trace"] = ideal_summary(cert.trace);
        ctx.certificates.push_back(Json{{"kind", "chain"}, {"links", cert.links.size()}});
    });
    CLI::App* trace_pure = trace_cmd->add_subcommand("pure-chain", "constant chain decision");
    trace_pure->add_option("--ring", fl->ring)->required();
    trace_pure->add_option("--gens", fl->gens)->required();
    trace_pure->callback([fl, &ctx] {
        RingBox box = ring_from_name(fl->ring);
        Ideal I = make_ideal(*box.ring, parse_elem_list(fl->gens), Side::TwoSided);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["ideal"] = ideal_to_json(I);
        PureChainResult res = pure_chain(*box.ring, I);
        ctx.result["is_trace"] = res.is_trace;
        ctx.result["idempotent"] = res.idempotent;
    });

    CLI::App* tel_cmd = app.add_subcommand("telescope", "direct system analysis");
    tel_cmd->require_subcommand(1);
    auto load_telescope = [fl](RingBox& box) {
        Json j = unwrap_telescope(read_json_input(fl->file));
        if (!j.is_object() || !j.contains("ring"))
            throw InputError("telescope file needs a ring label");
        box = ring_from_name(j.at("ring").get<std::string>());
        return telescope_from_json(*box.ring, j);
    };
    CLI::App* tel_verify = tel_cmd->add_subcommand("verify", "check link certificates");
    tel_verify->add_option("--file", fl->file, "telescope JSON, - for stdin");
    tel_verify->add_option("--depth", fl->depth);
    tel_verify->callback([fl, &ctx, load_telescope] {
        RingBox box;
        Telescope T = load_telescope(box);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["sizes"] = T.sizes;
        ctx.inputs["depth"] = fl->depth;
        CertificateReport rep = verify_certificates(T, fl->depth);
        ctx.result = cert_report_json(rep);
        ctx.certificates.push_back(Json{{"kind", "links"}, {"checked", rep.checked}});
    });
    CLI::App* tel_trace = tel_cmd->add_subcommand("trace", "entry trace ideal");
    tel_trace->add_option("--file", fl->file);
    tel_trace->add_option("--depth", fl->depth);
    tel_trace->callback([fl, &ctx, load_telescope] {
        RingBox box;
        Telescope T = load_telescope(box);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["depth"] = fl->depth;
        TelescopeTraceResult res = telescope_trace(T, fl->depth);
        ctx.result["trace"] = ideal_summary(res.trace);
        ctx.result["stabilized"] = res.stabilized;
        ctx.result["exact"] = res.exact;
        ctx.result["stabilized_at"] = res.stabilized_at;
    });
    CLI::App* tel_tensor = tel_cmd->add_subcommand("tensor", "reduce modulo an ideal");
    tel_tensor->add_option("--file", fl->file);
    tel_tensor->add_option("--ideal", fl->ideal, "two-sided ideal literal JSON")->required();
    tel_tensor->add_option("--depth", fl->depth);
    tel_tensor->callback([fl, &ctx, load_telescope] {
        RingBox box;
        Telescope T = load_telescope(box);
        Json lit = Json::parse(fl->ideal, nullptr, false);
        if (lit.is_discarded()) throw InputError("--ideal must be an ideal literal JSON");
        if (!lit.contains("side")) lit["side"] = "two_sided";
        Ideal I = ideal_from_json(*box.ring, lit);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["ideal"] = ideal_to_json(I);
        ctx.inputs["depth"] = fl->depth;
        TensorResult tq = tensor_quotient(T, I, fl->depth);
        ctx.result["quotient_size"] = tq.quotient->ring.size();
        ctx.result["reduced_sizes"] = tq.reduced.sizes;
        bool zero = true;
        for (const Mat& m : tq.reduced.X)
            if (!mat_is_zero(tq.quotient->ring, m)) zero = false;
        ctx.result["reduced_is_zero"] = zero;
        ctx.result["fg"] = fg_to_json(tq.fg);
        ctx.certificates.push_back(Json{{"kind", "fg_rule"}, {"rule", tq.fg.rule}});
    });
    CLI::App* tel_wh = tel_cmd->add_subcommand("build-whitehead",
                                               "column telescope for an idempotent left span");
    tel_wh->add_option("--ring", fl->ring)->required();
    tel_wh->add_option("--gens", fl->gens)->required();
    tel_wh->add_option("--depth", fl->depth);
    tel_wh->callback([fl, &ctx] {
        RingBox box = ring_from_name(fl->ring);
        std::vector<Elem> gens = parse_elem_list(fl->gens);
        Ideal I = make_ideal(*box.ring, gens, Side::TwoSided);
        Telescope wh = whitehead_build(*box.ring, I, gens);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["gens"] = gens;
        ctx.inputs["depth"] = fl->depth;
        ctx.result["telescope"] =
            telescope_to_json(materialized(wh, fl->depth + 2), box.label);
    });
    CLI::App* tel_lift = tel_cmd->add_subcommand("build-lift",
                                                 "lift a quotient telescope along a chain");
    tel_lift->add_option("--ring", fl->ring)->required();
    tel_lift->add_option("--ideal", fl->ideal)->required();
    tel_lift->add_option("--file", fl->file, "reduced telescope over the quotient");
    tel_lift->add_option("--chain", fl->chain, "lift chain JSON file")->required();
    tel_lift->add_option("--depth", fl->depth);
    tel_lift->callback([fl, &ctx] {
        RingBox box = ring_from_name(fl->ring);
        Json lit = Json::parse(fl->ideal, nullptr, false);
        if (lit.is_discarded()) throw InputError("--ideal must be an ideal literal JSON");
        if (!lit.contains("side")) lit["side"] = "two_sided";
        Ideal I = ideal_from_json(*box.ring, lit);
        Quotient Q = quotient_ring(*box.ring, I);
        Telescope Tbar =
            telescope_from_json(Q.ring, unwrap_telescope(read_json_input(fl->file)));
        LiftChain chain = liftchain_from_json(*box.ring, load_json_file(fl->chain));
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["ideal"] = ideal_to_json(I);
        ctx.inputs["depth"] = fl->depth;
        Telescope lifted = lift_build(*box.ring, I, Tbar, chain, fl->depth);
        CertificateReport rep = verify_certificates(lifted, fl->depth - 1);
        ctx.result["telescope"] = telescope_to_json(lifted, box.label);
        ctx.result["verify"] = cert_report_json(rep);
        ctx.certificates.push_back(Json{{"kind", "links"}, {"checked", rep.checked}});
    });

    CLI::App* tree_cmd = app.add_subcommand("tree", "branching chain systems");
    tree_cmd->require_subcommand(1);
    auto load_chain = [fl](RingBox& box) {
        Json j = read_json_input(fl->file);
        if (!j.is_object() || !j.contains("ring"))
            throw InputError("chain spec needs a ring label");
        box = ring_from_name(j.at("ring").get<std::string>());
        return chainspec_from_json(*box.ring, j);
    };
    CLI::App* tree_build = tree_cmd->add_subcommand("build", "scaffold and certify a tree");
    tree_build->add_option("--file", fl->file, "chain spec JSON");
    tree_build->add_option("--sequence", fl->sequence, "lift multiplicities c0,c1,...");
    tree_build->add_option("--depth", fl->depth);
    tree_build->callback([fl, &ctx, load_chain] {
        RingBox box;
        ChainSpec cs = load_chain(box);
        cs = complete_lifts(cs);
        std::vector<int> seq = parse_int_list(fl->sequence);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["chain"] = chainspec_to_json(cs, box.label);
        ctx.inputs["sequence"] = seq;
        ctx.inputs["depth"] = fl->depth;
        Telescope T;
        if (seq.empty()) {
            TreeBuild tb = build_basic_tree(cs, fl->depth);
            ctx.result["level_sizes"] = tb.rep.levels;
            ctx.result["vertex_count"] = tb.rep.vertex_count();
            ctx.result["edge_count"] = tb.rep.edges.size();
            T = std::move(tb.telescope);
        } else {
            T = build_sequence_tree(cs, seq, fl->depth);
            ctx.result["level_sizes"] = T.sizes;
        }
        ctx.result["telescope"] =
            telescope_to_json(flattened(T, fl->depth + 1), box.label);
        CertificateReport rep = verify_certificates(T, fl->depth - 1);
        ctx.certificates.push_back(cert_report_json(rep));
    });
    CLI::App* tree_mult = tree_cmd->add_subcommand("multiplicities", "census multiplicity vector");
    tree_mult->add_option("--file", fl->file);
    tree_mult->add_option("--k", fl->k)->required();
    tree_mult->add_option("--sequence", fl->sequence);
    tree_mult->add_option("--depth", fl->depth);
    tree_mult->add_option("--alpha", fl->alpha, "claimed multiplicities a0,a1,...");
    tree_mult->callback([fl, &ctx, load_chain] {
        RingBox box;
        ChainSpec cs = load_chain(box);
        cs = complete_lifts(cs);
        std::vector<int> seq = parse_int_list(fl->sequence);
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["chain"] = chainspec_to_json(cs, box.label);
        ctx.inputs["sequence"] = seq;
        ctx.inputs["k"] = fl->k;
        ctx.inputs["depth"] = fl->depth;
        std::vector<long long> mv = multiplicity_vector(cs, seq, fl->k);
        ctx.result["alpha"] = mv;
        ctx.result["verified"] = verify_multiplicities(cs, seq, fl->k, fl->depth);
        if (!fl->alpha.empty()) {
            std::vector<long long> claim;
            for (int v : parse_int_list(fl->alpha)) claim.push_back(v);
            ctx.inputs["alpha"] = claim;
            ctx.result["agrees"] =
                multiplicities_match(cs, seq, fl->k, fl->depth, claim);
        }
    });
    CLI::App* tree_fair = tree_cmd->add_subcommand("fairsize", "minimal finite-quotient ideal");
    tree_fair->add_option("--file", fl->file, "telescope or chain spec JSON");
    tree_fair->add_option("--depth", fl->depth);
    tree_fair->callback([fl, &ctx] {
        Json j = unwrap_telescope(read_json_input(fl->file));
        if (!j.is_object() || !j.contains("ring"))
            throw InputError("input file needs a ring label");
        RingBox box = ring_from_name(j.at("ring").get<std::string>());
        Telescope T;
        if (j.contains("ideals")) {
            ChainSpec cs = complete_lifts(chainspec_from_json(*box.ring, j));
            T = build_basic_tree(cs, fl->depth).telescope;
        } else {
            T = telescope_from_json(*box.ring, j);
        }
        ctx.inputs["ring"] = box.spec;
        ctx.inputs["depth"] = fl->depth;
        FairSizeResult res = fair_size_analyze(T, fl->depth);
        ctx.result["minimal"] = ideal_summary(res.minimal);
        ctx.result["exact"] = res.exact;
        ctx.result["stabilized_at"] = res.stabilized_at;
        Json census = Json::array();
        for (const auto& [ideal, status] : res.census)
            census.push_back(Json{{"ideal", ideal_summary(ideal)},
                                  {"status", fg_status_name(status)}});
        ctx.result["census"] = census;
        ctx.result["note"] = res.note;
    });

    CLI::App* mono_cmd = app.add_subcommand("monoid", "congruence monoids of dimension vectors");
    mono_cmd->require_subcommand(1);
    auto add_system_flags = [fl](CLI::App* cmd) {
        cmd->add_option("--rows", fl->rows, "congruence rows, e.g. \"2,3;1,2\"");
        cmd->add_option("--mods", fl->mods, "moduli, e.g. \"5,2\"");
        cmd->add_option("--dim", fl->dim, "coordinate count when no rows are given");
        cmd->add_option("--cap", fl->mcap, "search cap");
    };
    auto system_inputs = [fl](Ctx& c) {
        c.inputs["rows"] = fl->rows;
        c.inputs["mods"] = fl->mods;
        return congruence_from_flags(fl->rows, fl->mods, fl->dim);
    };
    CLI::App* mono_gens = mono_cmd->add_subcommand("gens", "irreducible generating set");
    add_system_flags(mono_gens);
    mono_gens->callback([fl, &ctx, system_inputs] {
        CongruenceSystem cs = system_inputs(ctx);
        Json arr = Json::array();
        for (const DimVector& g : monoid_generators(cs, fl->mcap))
            arr.push_back(dim_to_json(g));
        ctx.result["generators"] = arr;
        ctx.result["count"] = arr.size();
    });
    CLI::App* mono_member = mono_cmd->add_subcommand("member", "membership test");
    add_system_flags(mono_member);
    mono_member->add_option("--x", fl->x, "dimension vector, e.g. \"1,inf\"")->required();
    mono_member->callback([fl, &ctx, system_inputs] {
        CongruenceSystem cs = system_inputs(ctx);
        DimVector x = dim_from_string(fl->x);
        ctx.inputs["x"] = dim_to_json(x);
        ctx.result["member"] = is_member(cs, x);
    });
    CLI::App* mono_express = mono_cmd->add_subcommand("express", "decompose over the generators");
    add_system_flags(mono_express);
    mono_express->add_option("--x", fl->x)->required();
    mono_express->callback([fl, &ctx, system_inputs] {
        CongruenceSystem cs = system_inputs(ctx);
        DimVector x = dim_from_string(fl->x);
        ctx.inputs["x"] = dim_to_json(x);
        Json arr = Json::array();
        for (const DimVector& p : express(cs, x, fl->mcap)) arr.push_back(dim_to_json(p));
        ctx.result["parts"] = arr;
    });
    CLI::App* mono_semi = mono_cmd->add_subcommand("semiperfect", "unit multiple witnesses");
    add_system_flags(mono_semi);
    mono_semi->callback([fl, &ctx, system_inputs] {
        CongruenceSystem cs = system_inputs(ctx);
        SemiPerfectReport rep = semiperfect_witnesses(cs);
        ctx.result["ok"] = rep.ok;
        ctx.result["witnesses"] = rep.witnesses;
    });

    CLI::App* corpus_cmd = app.add_subcommand("corpus", "golden scenario suites");
    corpus_cmd->require_subcommand(1);
    CLI::App* corpus_run = corpus_cmd->add_subcommand("run", "run a manifest against goldens");
    corpus_run->add_option("--manifest", fl->manifest)->required();
    corpus_run->callback([fl, &ctx, &extra_exit] {
        int failures = 0;
        cli_detail::run_corpus(fl->manifest, ctx, failures);
        if (failures > 0) extra_exit = 2;
    });
}

}  // namespace cli_detail

/// Runs one command line and returns the report plus the process exit code:
/// 0 for a completed decision (yes or no alike), 2 for bad input or broken
/// preconditions, 3 when a search cap or undetermined analysis stopped it.
inline RunOutcome dispatch(const std::vector<std::string>& args) {
    const auto start = std::chrono::steady_clock::now();
    std::string cmdline = "trideal";
    for (const std::string& a : args) cmdline += " " + a;

    cli_detail::Ctx ctx;
    int extra_exit = 0;
    CLI::App app{"exact toolkit for projective limits over finite rings"};
    cli_detail::build_app(app, ctx, extra_exit);

    std::vector<const char*> argv;
    argv.push_back("trideal");
    for (const std::string& a : args) argv.push_back(a.c_str());

    RunOutcome out;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        out.report["command"] = cmdline;
        out.report["inputs"] = ctx.inputs;
        out.report["result"] = ctx.result;
        out.report["certificates"] = ctx.certificates;
        const auto stop = std::chrono::steady_clock::now();
        out.report["timing_ms"] =
            std::chrono::duration<double, std::milli>(stop - start).count();
        out.exit_code = extra_exit;
    } catch (const CLI::CallForHelp&) {
        out.report = Json{{"help", app.help()}};
        out.exit_code = 0;
    } catch (const CLI::ParseError& e) {
        out.report = Json{{"error", "usage"}, {"detail", e.what()}};
        out.exit_code = 2;
    } catch (const Error& e) {
        out.report = Json{{"error", cli_detail::error_kind(e)}, {"detail", e.what()}};
        out.exit_code = cli_detail::error_exit_code(e);
    } catch (const std::exception& e) {
        out.report = Json{{"error", "internal"}, {"detail", e.what()}};
        out.exit_code = 2;
    }
    return out;
}

}  // namespace trideal
