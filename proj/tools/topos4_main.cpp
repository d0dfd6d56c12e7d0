// ==== topos4_main.cpp — command-line front end with JSON-line reports ====
//
// Exit codes: 0 pass/value, 1 property refuted, 2 input error, 3 resource
// cap exceeded, 4 internal verification failure. One JSON report line per
// run on stdout; graph artifacts are plain DOT.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topos4/algebra.hpp"
#include "topos4/common.hpp"
#include "topos4/constructions.hpp"
#include "topos4/formula.hpp"
#include "topos4/frames.hpp"
#include "topos4/genspace.hpp"

using namespace topos4;
using nlohmann::json;

namespace {

// ── Plumbing ──

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("cannot write file: " + path);
    out << text;
}

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw PreconditionError(what + " is not valid JSON");
    return j;
}

// FNV-1a over every input that influenced the run, for the report line.
struct Digest {
    uint64_t h = 1469598103934665603ull;
    void feed(const std::string& part) {
        for (unsigned char c : part) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(h));
        return buf;
    }
};

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

json base_report(const std::string& command, const Digest& d,
                 const std::string& verdict, const Timer& t) {
    return json{{"command", command},
                {"inputs", d.hex()},
                {"verdict", verdict},
                {"timing_ms", t.ms()}};
}

void emit(const json& report) { std::cout << report.dump() << "\n"; }

std::vector<size_t> parse_index_list(const std::string& text) {
    std::vector<size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t pos = 0;
        unsigned long v = std::stoul(item, &pos);
        if (pos != item.size())
            throw PreconditionError("bad index in list: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

json subset_json(const Subset& s) { return json(elements(s)); }

// ── Structures on disk ──
//
// Frame files: {"worlds", "relation", "labels"?, "field"?} with field
// members as bit masks. Space files: {"carrier", "opens", "field"}.
// A missing field means the full powerset.

GeneralStructure load_structure(const json& j) {
    if (j.is_object() && j.contains("worlds")) {
        FiniteFrame f = frame_from_json(j);
        if (!j.contains("field")) return general_frame_powerset(f);
        if (f.n > 16)
            throw ResourceCapError(
                "field-bearing frame files cap the carrier at 16");
        if (!j["field"].is_array())
            throw PreconditionError("frame field must be an array of masks");
        std::vector<Subset> members;
        for (const json& m : j["field"]) {
            if (!m.is_number_unsigned())
                throw PreconditionError("field masks must be nonnegative integers");
            uint64_t mask = m.get<uint64_t>();
            if (f.n < 64 && mask >> f.n)
                throw PreconditionError("field mask exceeds the carrier");
            members.emplace_back(f.n, mask);
        }
        return make_general_frame(f, members);
    }
    if (j.is_object() && j.contains("carrier")) return space_from_json(j);
    throw PreconditionError(
        "structure JSON needs \"worlds\" (frame) or \"carrier\" (space)");
}

GeneralStructure load_structure_file(const std::string& path, Digest& d) {
    std::string text = read_file(path);
    d.feed(text);
    return load_structure(parse_json(text, path));
}

json structure_to_json(const GeneralStructure& s) {
    if (s.kind == BaseKind::Space) return space_to_json(s);
    if (s.carrier() > 16)
        throw ResourceCapError("frame structure serialization caps at 16");
    json j = frame_to_json(s.frame);
    std::vector<uint64_t> field;
    for (const Subset& m : s.field.members) field.push_back(m.to_ulong());
    std::sort(field.begin(), field.end());
    j["field"] = field;
    return j;
}

Valuation valuation_from_json(FormulaArena& ar, const json& j, size_t n) {
    if (!j.is_object())
        throw PreconditionError("valuation must be an object of world lists");
    Valuation val;
    for (const auto& [name, worlds] : j.items()) {
        FormulaId letter = ar.letter(name);
        Subset s(n);
        for (const json& w : worlds) {
            if (!w.is_number_unsigned() || w.get<size_t>() >= n)
                throw PreconditionError("valuation world out of range for '" +
                                        name + "'");
            s.set(w.get<size_t>());
        }
        val[ar.letter_index(letter)] = s;
    }
    return val;
}

// ── validity ──

int run_validity(const std::string& file, const std::string& formula,
                 int max_letters) {
    Timer t;
    Digest d;
    GeneralStructure s = load_structure_file(file, d);
    d.feed(formula);
    d.feed(std::to_string(max_letters));
    FormulaArena ar;
    FormulaId phi = parse_or_throw(ar, formula);
    ValidityReport rep = validates(ar, s.field, phi, max_letters);
    json out = base_report("validity", d, rep.valid ? "valid" : "refuted", t);
    out["formula"] = print(ar, phi);
    if (!rep.valid) {
        json v = json::object();
        for (const auto& [name, set] : rep.countervaluation)
            v[name] = subset_json(set);
        out["counterexample"] = {{"world", rep.world}, {"valuation", v}};
    }
    emit(out);
    return rep.valid ? 0 : 1;
}

// ── construct ──

void write_artifact(json& report, const json& artifact,
                    const std::string& out_path) {
    if (out_path.empty()) {
        report["artifact"] = artifact;
    } else {
        write_file(out_path, artifact.dump(2) + "\n");
        report["artifact_file"] = out_path;
    }
}

void write_dot(json& report, const FiniteFrame& f,
               const std::string& dot_path) {
    if (dot_path.empty()) return;
    write_file(dot_path, frame_to_dot(f));
    report["dot_file"] = dot_path;
}

int run_construct_tcomb(const std::string& frame_file, size_t depth,
                        const std::string& out, const std::string& dot) {
    Timer t;
    Digest d;
    std::string text = read_file(frame_file);
    d.feed(text);
    d.feed(std::to_string(depth));
    FiniteFrame f = frame_from_json(parse_json(text, frame_file));
    LabeledMap m = tcomb_labeling(f, depth);
    CombReport rep = verify_comb_pmorphism(m);
    if (!rep.ok)
        throw VerificationError("comb labeling failed its own check: " +
                                rep.detail);
    json out_rep = base_report("construct tcomb", d, "pass", t);
    out_rep["report"] = {{"ok", rep.ok}, {"margin", rep.margin}};
    write_artifact(out_rep, labeled_map_to_json(m), out);
    write_dot(out_rep, m.tree.frame, dot);
    emit(out_rep);
    return 0;
}

int run_construct_interval(size_t depth, const std::string& out) {
    Timer t;
    Digest d;
    d.feed(std::to_string(depth));
    IntervalConstruction c = interval_construction(depth);
    IntervalReport rep = verify_interval_lemmas(c);
    if (!rep.ok)
        throw VerificationError("interval construction failed its lemmas: " +
                                rep.detail);
    json out_rep = base_report("construct interval", d, "pass", t);
    out_rep["report"] = {{"ok", rep.ok},
                         {"children_split_ok", rep.children_split_ok},
                         {"labels_complete_ok", rep.labels_complete_ok},
                         {"disjoint_ok", rep.disjoint_ok},
                         {"length_ok", rep.length_ok},
                         {"removed_total", rational_string(rep.removed_total)}};
    write_artifact(out_rep, interval_to_json(c), out);
    emit(out_rep);
    return 0;
}

int run_construct_cantor(size_t branching, size_t depth,
                         const std::string& out) {
    Timer t;
    Digest d;
    d.feed(std::to_string(branching));
    d.feed(std::to_string(depth));
    CantorMap cm = cantor_to_Lalpha(branching, depth);
    if (!cm.report.ok)
        throw VerificationError("tree surjection failed its own check: " +
                                cm.report.detail);
    json artifact;
    artifact["target"] = frame_to_json(cm.target.frame);
    json labels = json::object();
    for (size_t v = 0; v < cm.source.frame.n; ++v) {
        std::string key;
        for (uint8_t b : cm.source.seqs[v]) key += char('0' + b);
        labels[key.empty() ? "e" : key] = cm.labels[v];
    }
    artifact["labels"] = std::move(labels);
    json out_rep = base_report("construct cantor-lalpha", d, "pass", t);
    out_rep["report"] = {{"ok", cm.report.ok},
                         {"literal_margin", cm.report.literal_margin},
                         {"children_margin", cm.report.children_margin},
                         {"target_nodes", cm.target.frame.n}};
    write_artifact(out_rep, artifact, out);
    emit(out_rep);
    return 0;
}

int run_construct_frame(const std::string& name, const FiniteFrame& f,
                        const Digest& d, const Timer& t,
                        const std::string& out, const std::string& dot) {
    json out_rep = base_report(name, d, "pass", t);
    out_rep["report"] = {{"worlds", f.n}, {"s4", check_s4(f).ok}};
    write_artifact(out_rep, frame_to_json(f), out);
    write_dot(out_rep, f, dot);
    emit(out_rep);
    return 0;
}

int run_construct_qstage(const std::string& frame_file, size_t stages,
                         const std::string& out) {
    Timer t;
    Digest d;
    std::string text = read_file(frame_file);
    d.feed(text);
    d.feed(std::to_string(stages));
    FiniteFrame f = frame_from_json(parse_json(text, frame_file));
    QStageResult r = q_stage(f, stages);
    json pts = json::array();
    for (const QPoint& p : r.points)
        pts.push_back({{"x", rational_string(p.x)},
                       {"label", p.label},
                       {"born", p.born}});
    json artifact = {{"points", std::move(pts)}, {"stages", r.stages}};
    json out_rep = base_report("construct qstage", d, "pass", t);
    out_rep["report"] = {
        {"points", r.points.size()},
        {"uncovered", r.uncovered},
        {"uncovered_only_last_stage", r.uncovered_only_last_stage}};
    write_artifact(out_rep, artifact, out);
    emit(out_rep);
    return 0;
}

// ── glue ──

int run_glue(const std::string& spec_file, const std::string& out,
             const std::string& dot) {
    Timer t;
    Digest d;
    std::string text = read_file(spec_file);
    d.feed(text);
    json j = parse_json(text, spec_file);
    if (!j.is_object() || !j.contains("parts") || !j.contains("shared") ||
        !j.contains("embeddings"))
        throw PreconditionError(
            "glue spec needs \"parts\", \"shared\", \"embeddings\"");
    GluingSpec spec;
    spec.shared = load_structure(j["shared"]);
    for (const json& p : j["parts"]) spec.parts.push_back(load_structure(p));
    for (const json& e : j["embeddings"]) {
        if (!e.is_array())
            throw PreconditionError("embeddings must be arrays of worlds");
        spec.embeddings.push_back(e.get<std::vector<size_t>>());
    }
    GluingResult res = glue(spec);
    json out_rep = base_report("glue", d, "pass", t);
    out_rep["rho"] = {{"ok", res.rho.ok},
                      {"onto", res.rho.onto},
                      {"failed", res.rho.failed},
                      {"detail", res.rho.detail}};
    json artifact = {{"glued", structure_to_json(res.glued)},
                     {"projections", res.projections}};
    write_artifact(out_rep, artifact, out);
    if (res.glued.kind == BaseKind::Frame)
        write_dot(out_rep, res.glued.frame, dot);
    emit(out_rep);
    return 0;
}

// ── cgfp ──

int run_cgfp(const std::string& file, const std::string& formula,
             long world, const std::string& valuation_text,
             const std::string& seed_text, const std::string& out) {
    Timer t;
    Digest d;
    GeneralStructure s = load_structure_file(file, d);
    d.feed(formula);
    d.feed(valuation_text);
    d.feed(seed_text);
    d.feed(std::to_string(world));
    FormulaArena ar;
    FormulaId phi = parse_or_throw(ar, formula);
    const size_t n = s.carrier();

    Valuation val;
    size_t w = 0;
    if (!valuation_text.empty()) {
        val = valuation_from_json(
            ar, parse_json(valuation_text, "valuation"), n);
        if (world < 0)
            throw PreconditionError("--world is required with --valuation");
        w = size_t(world);
    } else {
        // search for the first refuting valuation, as the validity sweep
        ValidityReport rep = validates(ar, s.field, phi);
        if (rep.valid)
            throw PreconditionError(
                "formula is valid on the structure; nothing to select");
        for (const auto& [name, set] : rep.countervaluation)
            val[ar.letter_index(ar.letter(name))] = set;
        w = world >= 0 ? size_t(world) : rep.world;
    }
    Subset seed(n);
    for (size_t v : parse_index_list(seed_text)) {
        if (v >= n) throw PreconditionError("seed world out of range");
        seed.set(v);
    }

    SelectionResult r = cgfp_select(ar, s, phi, val, w, seed);
    json out_rep = base_report("cgfp", d, "pass", t);
    json witnesses = json::array();
    for (const WitnessChoice& c : r.witness_log)
        witnesses.push_back({{"world", c.world},
                             {"formula", print(ar, c.formula)},
                             {"witness", c.witness}});
    out_rep["kept_worlds"] = r.kept_worlds;
    out_rep["witnesses"] = std::move(witnesses);
    out_rep["field_enlarged"] = r.field_enlarged;
    out_rep["raw_values"] = r.raw_value_count;
    out_rep["refuted_at"] = w;
    json v = json::object();
    for (const auto& [idx, set] : val) v[ar.letter_name(idx)] = subset_json(set);
    out_rep["valuation"] = std::move(v);
    GeneralStructure restricted;
    restricted.kind = BaseKind::Frame;
    restricted.frame = r.restricted_frame;
    restricted.field = r.restricted_field;
    write_artifact(out_rep, structure_to_json(restricted), out);
    emit(out_rep);
    return 0;
}

// ── translate / convert ──

int run_translate(const std::string& formula) {
    Timer t;
    Digest d;
    d.feed(formula);
    FormulaArena ar;
    FormulaId phi = parse_or_throw(ar, formula);
    FormulaId boxed = godel_translate(ar, phi);
    json out = base_report("translate", d, "value", t);
    out["input"] = print(ar, phi);
    out["output"] = print(ar, boxed);
    emit(out);
    return 0;
}

int run_convert(const std::string& file, const std::string& to,
                const std::string& out) {
    Timer t;
    Digest d;
    GeneralStructure s = load_structure_file(file, d);
    d.feed(to);
    GeneralStructure res;
    if (to == "frame") {
        res = s.kind == BaseKind::Frame ? s : to_frame(s);
    } else if (to == "space") {
        res = s.kind == BaseKind::Space ? s : to_space(s);
    } else {
        throw PreconditionError("--to must be 'frame' or 'space'");
    }
    json out_rep = base_report("convert", d, "pass", t);
    out_rep["to"] = to;
    write_artifact(out_rep, structure_to_json(res), out);
    emit(out_rep);
    return 0;
}

// ── check ──

int run_check_s4(const std::string& file) {
    Timer t;
    Digest d;
    std::string text = read_file(file);
    d.feed(text);
    FiniteFrame f = frame_from_json(parse_json(text, file));
    S4Report rep = check_s4(f);
    json out = base_report("check s4", d, rep.ok ? "pass" : "fail", t);
    if (!rep.ok)
        out["counterexample"] = {{"failed", rep.failed},
                                 {"detail", rep.detail()}};
    emit(out);
    return rep.ok ? 0 : 1;
}

int run_check_pmorphism(const std::string& src_file,
                        const std::string& dst_file,
                        const std::string& map_text) {
    Timer t;
    Digest d;
    std::string src_text = read_file(src_file), dst_text = read_file(dst_file);
    d.feed(src_text);
    d.feed(dst_text);
    d.feed(map_text);
    FiniteFrame src = frame_from_json(parse_json(src_text, src_file));
    FiniteFrame dst = frame_from_json(parse_json(dst_text, dst_file));
    PMorphismReport rep =
        check_p_morphism(src, dst, parse_index_list(map_text));
    json out = base_report("check pmorphism", d, rep.ok ? "pass" : "fail", t);
    out["onto"] = rep.onto;
    if (!rep.ok)
        out["counterexample"] = {{"failed", rep.failed},
                                 {"detail", rep.detail()}};
    emit(out);
    return rep.ok ? 0 : 1;
}

int run_check_interior(const std::string& src_file,
                       const std::string& dst_file,
                       const std::string& map_text) {
    Timer t;
    Digest d;
    GeneralStructure src = load_structure_file(src_file, d);
    GeneralStructure dst = load_structure_file(dst_file, d);
    d.feed(map_text);
    InteriorMapReport rep =
        check_interior_map(parse_index_list(map_text), src, dst);
    json out = base_report("check interior", d, rep.ok ? "pass" : "fail", t);
    out["onto"] = rep.onto;
    if (!rep.ok)
        out["counterexample"] = {{"failed", rep.failed},
                                 {"detail", rep.detail}};
    emit(out);
    return rep.ok ? 0 : 1;
}

int run_check_descriptive(const std::string& file) {
    Timer t;
    Digest d;
    GeneralStructure s = load_structure_file(file, d);
    DescriptiveReport rep = check_descriptive(s);
    json out = base_report("check descriptive", d, rep.all() ? "pass" : "fail", t);
    out["differentiated"] = rep.differentiated;
    out["compact"] = rep.compact;
    out["compact_note"] = rep.compact_note;
    out["tight"] = rep.tight;
    if (!rep.differentiated)
        out["undistinguished"] = {rep.diff_w, rep.diff_v};
    if (!rep.tight) out["tight_detail"] = rep.tight_detail;
    emit(out);
    return rep.all() ? 0 : 1;
}

int run_check_connected(const std::string& file, bool well) {
    Timer t;
    Digest d;
    GeneralStructure s = load_structure_file(file, d);
    bool ok = well ? is_well_connected(s.field) : is_connected(s.field);
    json out = base_report(well ? "check well-connected" : "check connected",
                           d, ok ? "pass" : "fail", t);
    emit(out);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "finite workbench for preorders, topologies, and modal validity"};
    app.require_subcommand(1);

    // validity
    std::string v_file, v_formula;
    int v_cap = -1;
    auto* validity =
        app.add_subcommand("validity", "sweep valuations for a refutation");
    validity->add_option("structure", v_file, "frame or space JSON file")
        ->required();
    validity->add_option("formula", v_formula, "modal formula")->required();
    validity->add_option("--max-letters", v_cap,
                         "letter cap (default TOPOS4_CAP or 4)");

    // construct
    auto* construct =
        app.add_subcommand("construct", "build and verify an artifact");
    construct->require_subcommand(1);
    std::string c_out, c_dot, c_frame;
    size_t c_depth = 3, c_branching = 2, c_alpha = 1, c_size = 2, c_stages = 2;
    auto add_out = [&](CLI::App* sub, bool dot) {
        sub->add_option("--out", c_out, "write the JSON artifact here");
        if (dot) sub->add_option("--dot", c_dot, "write DOT here");
    };
    auto* c_tcomb = construct->add_subcommand(
        "tcomb", "comb labeling of the binary tree over a frame");
    c_tcomb->add_option("--frame", c_frame, "frame JSON file")->required();
    c_tcomb->add_option("--depth", c_depth, "tree depth")->required();
    add_out(c_tcomb, true);
    auto* c_interval = construct->add_subcommand(
        "interval", "nested middle-thirds families on [0,1]");
    c_interval->add_option("--depth", c_depth, "nesting depth")->required();
    add_out(c_interval, false);
    auto* c_cantor = construct->add_subcommand(
        "cantor-lalpha", "binary tree onto the widest smaller b-ary tree");
    c_cantor->add_option("--branching", c_branching, "target branching")
        ->required();
    c_cantor->add_option("--depth", c_depth, "source depth")->required();
    add_out(c_cantor, false);
    auto* c_fork = construct->add_subcommand(
        "fork", "root below a cluster and a separate endpoint");
    c_fork->add_option("--alpha", c_alpha, "cluster size")->required();
    add_out(c_fork, true);
    auto* c_cluster =
        construct->add_subcommand("cluster", "totally related worlds");
    c_cluster->add_option("--size", c_size, "world count")->required();
    add_out(c_cluster, true);
    auto* c_tree =
        construct->add_subcommand("tree", "truncated b-ary tree frame");
    c_tree->add_option("--branching", c_branching, "branching")->required();
    c_tree->add_option("--depth", c_depth, "depth")->required();
    add_out(c_tree, true);
    auto* c_qstage = construct->add_subcommand(
        "qstage", "staged rational labeling inside (0,1)");
    c_qstage->add_option("--frame", c_frame, "frame JSON file")->required();
    c_qstage->add_option("--stages", c_stages, "stage count")->required();
    add_out(c_qstage, false);

    // glue
    std::string g_spec, g_out, g_dot;
    auto* glue_cmd =
        app.add_subcommand("glue", "glue structures along a shared part");
    glue_cmd->add_option("spec", g_spec, "gluing spec JSON file")->required();
    glue_cmd->add_option("--out", g_out, "write the JSON artifact here");
    glue_cmd->add_option("--dot", g_dot, "write DOT here (frame results)");

    // cgfp
    std::string f_file, f_formula, f_val, f_seed, f_out;
    long f_world = -1;
    auto* cgfp_cmd = app.add_subcommand(
        "cgfp", "select a witness core for a refuted formula");
    cgfp_cmd->add_option("structure", f_file, "frame JSON file")->required();
    cgfp_cmd->add_option("formula", f_formula, "modal formula")->required();
    cgfp_cmd->add_option("--world", f_world,
                         "refutation world (default: found by search)");
    cgfp_cmd->add_option("--valuation", f_val,
                         "inline valuation JSON, e.g. {\"p\": [0]}");
    cgfp_cmd->add_option("--seed", f_seed,
                         "comma-separated worlds kept from the start");
    cgfp_cmd->add_option("--out", f_out, "write the restricted structure here");

    // translate
    std::string t_formula;
    auto* translate_cmd = app.add_subcommand(
        "translate", "box every subformula of an intuitionistic formula");
    translate_cmd->add_option("formula", t_formula, "formula")->required();

    // convert
    std::string cv_file, cv_to, cv_out;
    auto* convert_cmd = app.add_subcommand(
        "convert", "move between frame and space presentations");
    convert_cmd->add_option("structure", cv_file, "structure JSON file")
        ->required();
    convert_cmd->add_option("--to", cv_to, "frame or space")->required();
    convert_cmd->add_option("--out", cv_out, "write the JSON artifact here");

    // check
    auto* check = app.add_subcommand("check", "run a single property check");
    check->require_subcommand(1);
    std::string k_file, k_src, k_dst, k_map;
    auto* k_s4 = check->add_subcommand("s4", "reflexive and transitive");
    k_s4->add_option("frame", k_file, "frame JSON file")->required();
    auto* k_pm = check->add_subcommand("pmorphism", "forth and back");
    k_pm->add_option("src", k_src, "source frame JSON")->required();
    k_pm->add_option("dst", k_dst, "target frame JSON")->required();
    k_pm->add_option("--map", k_map, "comma-separated world images")
        ->required();
    auto* k_int = check->add_subcommand(
        "interior", "continuous and open with field pullback");
    k_int->add_option("src", k_src, "source structure JSON")->required();
    k_int->add_option("dst", k_dst, "target structure JSON")->required();
    k_int->add_option("--map", k_map, "comma-separated point images")
        ->required();
    auto* k_desc = check->add_subcommand(
        "descriptive", "differentiated, compact, tight");
    k_desc->add_option("structure", k_file, "structure JSON file")->required();
    auto* k_conn = check->add_subcommand("connected",
                                         "no proper clopen field member");
    k_conn->add_option("structure", k_file, "structure JSON file")->required();
    auto* k_wconn = check->add_subcommand(
        "well-connected", "some point meets every nonempty open member");
    k_wconn->add_option("structure", k_file, "structure JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(validity))
            return run_validity(v_file, v_formula, v_cap);
        if (app.got_subcommand(construct)) {
            if (construct->got_subcommand(c_tcomb))
                return run_construct_tcomb(c_frame, c_depth, c_out, c_dot);
            if (construct->got_subcommand(c_interval))
                return run_construct_interval(c_depth, c_out);
            if (construct->got_subcommand(c_cantor))
                return run_construct_cantor(c_branching, c_depth, c_out);
            if (construct->got_subcommand(c_fork)) {
                Timer t;
                Digest d;
                d.feed(std::to_string(c_alpha));
                return run_construct_frame("construct fork",
                                           make_fork(c_alpha), d, t, c_out,
                                           c_dot);
            }
            if (construct->got_subcommand(c_cluster)) {
                Timer t;
                Digest d;
                d.feed(std::to_string(c_size));
                return run_construct_frame("construct cluster",
                                           make_cluster(c_size), d, t, c_out,
                                           c_dot);
            }
            if (construct->got_subcommand(c_tree)) {
                Timer t;
                Digest d;
                d.feed(std::to_string(c_branching));
                d.feed(std::to_string(c_depth));
                return run_construct_frame(
                    "construct tree", truncated_tree(c_branching, c_depth).frame,
                    d, t, c_out, c_dot);
            }
            if (construct->got_subcommand(c_qstage))
                return run_construct_qstage(c_frame, c_stages, c_out);
        }
        if (app.got_subcommand(glue_cmd)) return run_glue(g_spec, g_out, g_dot);
        if (app.got_subcommand(cgfp_cmd))
            return run_cgfp(f_file, f_formula, f_world, f_val, f_seed, f_out);
        if (app.got_subcommand(translate_cmd)) return run_translate(t_formula);
        if (app.got_subcommand(convert_cmd))
            return run_convert(cv_file, cv_to, cv_out);
        if (app.got_subcommand(check)) {
            if (check->got_subcommand(k_s4)) return run_check_s4(k_file);
            if (check->got_subcommand(k_pm))
                return run_check_pmorphism(k_src, k_dst, k_map);
            if (check->got_subcommand(k_int))
                return run_check_interior(k_src, k_dst, k_map);
            if (check->got_subcommand(k_desc))
                return run_check_descriptive(k_file);
            if (check->got_subcommand(k_conn))
                return run_check_connected(k_file, false);
            if (check->got_subcommand(k_wconn))
                return run_check_connected(k_file, true);
        }
        throw PreconditionError("no subcommand selected");
    } catch (const VerificationError& e) {
        emit({{"verdict", "error"}, {"kind", "verification"},
              {"error", e.what()}});
        return 4;
    } catch (const ResourceCapError& e) {
        emit({{"verdict", "error"}, {"kind", "resource-cap"},
              {"error", e.what()}});
        return 3;
    } catch (const PreconditionError& e) {
        emit({{"verdict", "error"}, {"kind", "input"}, {"error", e.what()}});
        return 2;
    } catch (const json::exception& e) {
        emit({{"verdict", "error"}, {"kind", "input"}, {"error", e.what()}});
        return 2;
    } catch (const std::invalid_argument& e) {
        emit({{"verdict", "error"}, {"kind", "input"}, {"error", e.what()}});
        return 2;
    } catch (const std::out_of_range& e) {
        emit({{"verdict", "error"}, {"kind", "input"}, {"error", e.what()}});
        return 2;
    }
}
