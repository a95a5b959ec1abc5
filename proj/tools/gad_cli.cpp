// Batch front door: validate .gad documents, run the analyses, enumerate
// ideal lattices, and evaluate algebra expressions, with deterministic
// JSON or text reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gad/dsl.hpp"
#include "gad/symbolic.hpp"

using nlohmann::json;
using namespace gad;

namespace {

// thrown for problems with the user's input (exit code 1)
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Elaborated load_document(const std::string& path, json* diag_out) {
    std::vector<Diagnostic> diags;
    try {
        auto obj = elaborate_document({path, read_file(path)}, &diags);
        if (diag_out)
            for (const auto& d : diags) diag_out->push_back(path + ":" + d.str());
        return obj;
    } catch (const ElaborationFailed& ex) {
        if (diag_out)
            for (const auto& d : diags) diag_out->push_back(path + ":" + d.str());
        throw InputError(path + ": " + ex.what());
    }
}

RingSpec parse_ring(const std::string& s) {
    if (s == "Z") return RingSpec::integers();
    if (s == "Q") return RingSpec::rationals();
    auto paren = [&](const std::string& prefix) -> std::optional<long> {
        if (s.rfind(prefix + "(", 0) != 0 || s.back() != ')') return std::nullopt;
        std::string num = s.substr(prefix.size() + 1, s.size() - prefix.size() - 2);
        if (num.empty()) return std::nullopt;
        for (char c : num)
            if (c < '0' || c > '9') return std::nullopt;
        return std::stol(num);
    };
    if (auto p = paren("GF")) return RingSpec::prime_field(mpz_class(*p));
    if (auto n = paren("Zn")) return RingSpec::integers_mod(mpz_class(*n));
    throw InputError("unknown ring '" + s + "' (use Z, Q, GF(p), Zn(n))");
}

void render_text(const json& j, std::ostream& out, std::size_t indent = 0) {
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || v.is_array()) {
                out << pad << k << ":\n";
                render_text(v, out, indent + 2);
            } else {
                out << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                    << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array()) {
                out << pad << "-\n";
                render_text(v, out, indent + 2);
            } else {
                out << pad << "- "
                    << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    } else {
        out << pad << j.dump() << "\n";
    }
}

// ---------------------------------------------------------------------------
// the --eval mini-language: p(v), s(a), u(g), '*', '+', postfix ' for adjoint

class ExprParser {
public:
    ExprParser(std::string text, SystemPtr sys, RingSpec ring, ProductConvention conv)
        : text_(std::move(text)), sys_(std::move(sys)), ring_(std::move(ring)), conv_(conv) {}

    SymbolicElement run() {
        auto e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw InputError("unexpected trailing input in expression at offset " +
                             std::to_string(pos_));
        return e;
    }

private:
    SymbolicElement parse_sum() {
        auto e = parse_product();
        for (;;) {
            skip_ws();
            if (!eat('+')) return e;
            e = e + parse_product();
        }
    }

    SymbolicElement parse_product() {
        auto e = parse_factor();
        for (;;) {
            skip_ws();
            if (!eat('*')) return e;
            e = e * parse_factor();
        }
    }

    SymbolicElement parse_factor() {
        auto e = parse_atom();
        for (;;) {
            skip_ws();
            if (eat('\'')) {
                e = e.adjoint();
                continue;
            }
            return e;
        }
    }

    SymbolicElement parse_atom() {
        skip_ws();
        if (eat('(')) {
            auto e = parse_sum();
            expect(')');
            return e;
        }
        char head = pos_ < text_.size() ? text_[pos_] : '\0';
        if (head != 'p' && head != 's' && head != 'u')
            throw InputError("expected p(...), s(...), u(...), or '(' at offset " +
                             std::to_string(pos_));
        ++pos_;
        expect('(');
        std::string arg;
        while (pos_ < text_.size() && text_[pos_] != ')') arg += text_[pos_++];
        expect(')');
        if (head == 'p')
            return SymbolicElement::vertex_proj(sys_, ring_,
                                                sys_->graph()->vertex_index(arg), conv_);
        if (head == 's')
            return SymbolicElement::edge_gen(sys_, ring_, sys_->graph()->edge_index(arg),
                                             conv_);
        return SymbolicElement::group_gen(sys_, ring_, parse_group_elem(arg), conv_);
    }

    GroupElem parse_group_elem(const std::string& arg) {
        std::vector<long long> vals;
        std::string cur;
        for (char c : arg + ",") {
            if (c == ',') {
                if (!cur.empty()) vals.push_back(std::stoll(cur));
                cur.clear();
            } else if (c == '-' || (c >= '0' && c <= '9')) {
                cur += c;
            } else if (c != ' ') {
                throw InputError("group element must be integers: '" + arg + "'");
            }
        }
        const auto& grp = sys_->group();
        if (grp->kind() == Group::Kind::FreeAbelian) {
            if (vals.size() != grp->rank())
                throw InputError("expected " + std::to_string(grp->rank()) +
                                 " exponents in u(...)");
            return GroupElem(grp, vals);
        }
        if (vals.size() != 1 || vals[0] < 0 ||
            static_cast<std::size_t>(vals[0]) >= grp->order())
            throw InputError("u(...) needs one element index below " +
                             std::to_string(grp->order()));
        return GroupElem(grp, static_cast<std::size_t>(vals[0]));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    bool eat(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw InputError(std::string("expected '") + c + "' at offset " +
                             std::to_string(pos_));
    }

    std::string text_;
    std::size_t pos_ = 0;
    SystemPtr sys_;
    RingSpec ring_;
    ProductConvention conv_;
};

// ---------------------------------------------------------------------------
// report assembly

struct ReportContext {
    std::string command;
    json echo = json::object();
    json results = json::object();
    json budget_usage = json::object();
    std::string format = "json";
    bool timings = false;
    double wall_ms = 0.0;

    void emit() const {
        json rep;
        rep["schema_version"] = 1;
        rep["command"] = echo;
        rep["command"]["name"] = command;
        rep["results"] = results;
        // wall-clock time is reported only on request so that reports stay
        // byte-stable for identical inputs
        rep["timings"] = timings ? json{{"wall_ms", wall_ms}} : json{{"reported", false}};
        rep["budget_usage"] = budget_usage;
        if (format == "json") {
            std::cout << rep.dump(2) << "\n";
        } else {
            render_text(rep, std::cout);
        }
    }
};

std::string mask_to_names(const BdsPtr& sys, AtomMask m) { return sys->mask_str(m); }

json bds_simplicity_json(const BdsPtr& sys) {
    auto rep = check_simplicity(sys);
    json out;
    out["condition_LB"] = rep.lb_holds;
    out["only_trivial_hereditary_saturated_ideals"] = rep.only_trivial_ideals;
    out["simple"] = rep.simple;
    out["notes"] = rep.notes;
    return out;
}

json system_json(const SystemPtr& sys, bool assume_hausdorff, std::size_t depth) {
    json out;
    auto conv = choose_convention(sys, 1);
    out["product_convention"] =
        conv.chosen == ProductConvention::AsPrinted ? "as-printed" : "germ-derived";
    if (!conv.as_printed_consistent) out["convention_note"] = conv.failure_note;
    if (sys->group()->is_finite()) {
        auto kern = principal_kernel_check(sys, depth);
        out["kernel_principality"] = {{"passed", kern.passed},
                                      {"candidates", kern.candidates},
                                      {"kernel_members", kern.kernel_members},
                                      {"violations", kern.violations}};
        if (assume_hausdorff) {
            auto simp = check_simplicity(sys, true);
            out["simplicity"] = {{"weakly_transitive", simp.weakly_transitive},
                                 {"circuits_have_entries", simp.circuits_have_entries},
                                 {"fixers_are_slack", simp.fixers_are_slack},
                                 {"simple", simp.simple},
                                 {"notes", simp.notes}};
        }
    } else {
        out["kernel_principality"] = "skipped: infinite acting group";
    }
    json hs = json::array();
    for (const auto& h : hereditary_saturated_vertex_sets(sys)) {
        json names = json::array();
        for (std::size_t v : h) names.push_back(sys->graph()->vertex_names()[v]);
        hs.push_back(names);
    }
    out["hereditary_saturated_vertex_sets"] = hs;
    return out;
}

int run_validate(const std::vector<std::string>& files, ReportContext& ctx) {
    bool all_ok = true;
    json arr = json::array();
    for (const auto& path : files) {
        json entry;
        entry["path"] = path;
        json diags = json::array();
        try {
            auto obj = load_document(path, &diags);
            entry["ok"] = true;
            entry["objects"] = {{"rings", obj.rings.size()},
                                {"groups", obj.groups.size()},
                                {"groupoids", obj.groupoids.size()},
                                {"cocycles", obj.cocycles.size()},
                                {"selfsimilar", obj.systems.size()},
                                {"bds", obj.bds.size()},
                                {"asserts", obj.asserts.size()}};
        } catch (const InputError& ex) {
            entry["ok"] = false;
            entry["error"] = ex.what();
            all_ok = false;
        }
        entry["diagnostics"] = diags;
        arr.push_back(std::move(entry));
    }
    ctx.results["files"] = arr;
    ctx.emit();
    return all_ok ? 0 : 1;
}

int run_analyze(const std::string& file, bool bds_only, bool assume_hausdorff,
                std::size_t depth, ReportContext& ctx) {
    json diags = json::array();
    auto obj = load_document(file, &diags);
    ctx.results["diagnostics"] = diags;

    json bds = json::object();
    for (const auto& [name, sys] : obj.bds) bds[name] = bds_simplicity_json(sys);
    ctx.results["bds"] = bds;

    if (!bds_only) {
        json gpds = json::object();
        for (const auto& [name, g] : obj.groupoids) {
            auto cls = classify(g);
            gpds[name] = {{"units", g->num_units()},
                          {"arrows", g->num_arrows()},
                          {"principal", cls.principal},
                          {"effective", cls.effective},
                          {"strongly_effective", cls.strongly_effective}};
        }
        ctx.results["groupoids"] = gpds;

        json cocs = json::object();
        for (const auto& [name, c] : obj.cocycles)
            cocs[name] = {{"symmetrically_graded",
                           is_symmetrically_graded(c, RingSpec::prime_field(2))}};
        ctx.results["cocycles"] = cocs;

        json systems = json::object();
        for (const auto& [name, sys] : obj.systems)
            systems[name] = system_json(sys, assume_hausdorff, depth);
        ctx.results["selfsimilar"] = systems;
    }
    ctx.budget_usage["kernel_check_depth"] = depth;
    ctx.emit();
    return 0;
}

int run_ideals(const std::string& file, bool graded, bool bds, const std::string& ring_str,
               std::string cocycle_name, unsigned long long budget, ReportContext& ctx) {
    json diags = json::array();
    auto obj = load_document(file, &diags);
    ctx.results["diagnostics"] = diags;
    EnumerationBudget eb;
    if (budget) eb.max_vectors = budget;
    ctx.budget_usage["max_vectors"] = eb.max_vectors;

    if (bds) {
        json out = json::object();
        for (const auto& [name, sys] : obj.bds) {
            auto lat = hs_ideal_lattice(sys);
            json members = json::array();
            for (AtomMask m : lat.members) members.push_back(mask_to_names(sys, m));
            out[name] = {{"hereditary_saturated_ideals", members},
                         {"count", lat.members.size()},
                         {"lattice_ops_verified", lat.lattice_ops_verified}};
        }
        ctx.results["bds"] = out;
        ctx.emit();
        return 0;
    }

    RingSpec ring = parse_ring(ring_str);
    if (graded) {
        if (obj.cocycles.empty()) throw InputError("no cocycle in " + file);
        if (cocycle_name.empty()) cocycle_name = obj.cocycles.begin()->first;
        auto it = obj.cocycles.find(cocycle_name);
        if (it == obj.cocycles.end())
            throw InputError("unknown cocycle '" + cocycle_name + "'");
        const Cocycle& c = it->second;
        auto lat = graded_ideal_lattice(c.groupoid(), c, ring, eb);
        json sets = json::array();
        for (const auto& e : lat.invariant_sets) {
            json names = json::array();
            for (std::size_t u : e.units) names.push_back(c.groupoid()->unit_names()[u]);
            sets.push_back({{"units", names}, {"ideal_dim", e.ideal.dim()}});
        }
        ctx.results["graded"] = {{"cocycle", cocycle_name},
                                 {"graded_ideals", lat.graded_ideals.size()},
                                 {"invariant_unit_sets", sets},
                                 {"bijection", lat.bijection},
                                 {"order_isomorphism", lat.order_isomorphism},
                                 {"lattice_ops_verified", lat.lattice_ops_verified}};
        ctx.emit();
        return 0;
    }

    json out = json::object();
    for (const auto& [name, g] : obj.groupoids) {
        auto ideals = enumerate_ideals(g, ring, eb);
        json dims = json::array();
        for (const auto& J : ideals) dims.push_back(J.dim());
        out[name] = {{"count", ideals.size()}, {"dims", dims}};
    }
    ctx.results["ideals"] = out;
    ctx.emit();
    return 0;
}

int run_algebra(const std::string& file, const std::string& expr,
                const std::string& ring_str, ReportContext& ctx) {
    json diags = json::array();
    auto obj = load_document(file, &diags);
    if (obj.systems.empty()) throw InputError("no selfsimilar system in " + file);
    auto sys = obj.systems.begin()->second;
    auto conv = choose_convention(sys, 1).chosen;
    RingSpec ring = parse_ring(ring_str);
    auto value = ExprParser(expr, sys, ring, conv).run();
    ctx.results["system"] = obj.systems.begin()->first;
    ctx.results["expression"] = expr;
    ctx.results["normal_form"] = value.str();
    ctx.results["is_zero"] = value.is_zero();
    ctx.results["terms"] = value.terms().size();
    ctx.emit();
    return 0;
}

int run_corpus(const std::string& dir, ReportContext& ctx) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw InputError(dir + " is not a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".gad") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return run_validate(files, ctx);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite groupoid algebra toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // let --format etc. appear after the subcommand

    ReportContext ctx;
    unsigned long long seed = 0;
    app.add_option("--seed", seed, "seed echoed into the report");
    app.add_option("--format", ctx.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--timings", ctx.timings, "include wall-clock timings in the report");

    // validate
    auto* validate = app.add_subcommand("validate", "parse and elaborate documents");
    std::vector<std::string> validate_files;
    validate->add_option("files", validate_files, "input .gad files")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "run the structural analyses");
    std::string analyze_file;
    bool bds_simplicity = false, assume_hausdorff = false;
    std::size_t depth = 3;
    analyze->add_option("file", analyze_file, "input .gad file")->required();
    analyze->add_flag("--bds-simplicity", bds_simplicity,
                      "only the Boolean-dynamics simplicity verdicts");
    analyze->add_flag("--assume-hausdorff", assume_hausdorff,
                      "accept the Hausdorff hypothesis for self-similar simplicity");
    analyze->add_option("--depth", depth, "path depth for the kernel check");

    // ideals
    auto* ideals = app.add_subcommand("ideals", "enumerate ideal lattices");
    std::string ideals_file, ring_str = "GF(2)", cocycle_name;
    bool graded = false, bds_flag = false;
    unsigned long long budget = 0;
    ideals->add_option("file", ideals_file, "input .gad file")->required();
    ideals->add_flag("--graded", graded, "graded ideals via a cocycle");
    ideals->add_flag("--bds", bds_flag, "hereditary saturated ideal lattice");
    ideals->add_option("--ring", ring_str, "coefficient ring (default GF(2))");
    ideals->add_option("--cocycle", cocycle_name, "cocycle name for --graded");
    ideals->add_option("--budget", budget, "max vectors scanned in enumeration");

    // algebra
    auto* algebra = app.add_subcommand("algebra", "evaluate an algebra expression");
    std::string algebra_file, eval_expr, algebra_ring = "Q";
    algebra->add_option("file", algebra_file, "input .gad file")->required();
    algebra->add_option("--eval", eval_expr, "expression over p(v), s(a), u(g), *, +, '")
        ->required();
    algebra->add_option("--ring", algebra_ring, "coefficient ring (default Q)");

    // corpus
    auto* corpus = app.add_subcommand("corpus", "validate every .gad file in a directory");
    std::string corpus_dir;
    corpus->add_option("dir", corpus_dir, "directory of .gad files")->required();

    CLI11_PARSE(app, argc, argv);

    ctx.echo["seed"] = seed;
    ctx.echo["format"] = ctx.format;

    auto started = std::chrono::steady_clock::now();
    try {
        int rc = 0;
        if (*validate) {
            ctx.command = "validate";
            ctx.echo["files"] = validate_files;
            rc = run_validate(validate_files, ctx);
        } else if (*analyze) {
            ctx.command = "analyze";
            ctx.echo["file"] = analyze_file;
            rc = run_analyze(analyze_file, bds_simplicity, assume_hausdorff, depth, ctx);
        } else if (*ideals) {
            ctx.command = "ideals";
            ctx.echo["file"] = ideals_file;
            ctx.echo["ring"] = ring_str;
            rc = run_ideals(ideals_file, graded, bds_flag, ring_str, cocycle_name, budget,
                            ctx);
        } else if (*algebra) {
            ctx.command = "algebra";
            ctx.echo["file"] = algebra_file;
            ctx.echo["ring"] = algebra_ring;
            rc = run_algebra(algebra_file, eval_expr, algebra_ring, ctx);
        } else if (*corpus) {
            ctx.command = "corpus";
            ctx.echo["dir"] = corpus_dir;
            rc = run_corpus(corpus_dir, ctx);
        }
        ctx.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count();
        return rc;
    } catch (const InputError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const BudgetExceeded& ex) {
        std::cerr << "budget exceeded: " << ex.what() << "\n";
        return 2;
    } catch (const UndecidableWithBudget& ex) {
        std::cerr << "budget exceeded: " << ex.what() << "\n";
        return 2;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 3;
    }
}
