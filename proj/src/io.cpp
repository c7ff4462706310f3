#include "ainfty/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ainfty/errors.hpp"

namespace ainfty {

namespace {

using json = nlohmann::ordered_json;

Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_number())
        throw ParseError(where + ": numeric literals are rejected; write the exact rational "
                                 "as a \"p/q\" string");
    if (!j.is_string()) throw ParseError(where + ": expected a \"p/q\" string");
    const auto text = j.get<std::string>();
    const auto r = Rational::try_parse(text);
    if (!r)
        throw ParseError(where + ": '" + text +
                         "' is not a rational literal (decimal forms are rejected)");
    return *r;
}

const json& require_field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (const char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string float_repr(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json value_to_json(const ExtendedValue& v) {
    if (v.is_infinite()) return "inf";
    if (v.is_exact()) return v.rational().str();
    return v.to_double();
}

std::string value_to_csv(const ExtendedValue& v) {
    if (v.is_infinite()) return "inf";
    if (v.is_exact()) return v.rational().str();
    return float_repr(v.to_double());
}

json params_to_json(const ConditionParams& p) {
    json j = json::object();
    if (p.p) j["p"] = p.p->str();
    if (p.q) j["q"] = p.q->str();
    if (p.delta) j["delta"] = p.delta->str();
    if (p.alpha) j["alpha"] = p.alpha->str();
    if (p.beta) j["beta"] = p.beta->str();
    if (p.s_grid) {
        json grid = json::array();
        for (const Rational& s : *p.s_grid) grid.push_back(s.str());
        j["s_grid"] = grid;
    }
    return j;
}

json verdict_to_json(const GrowthVerdict& v) {
    json j;
    j["kind"] = to_string(v.kind);
    if (v.rate) {
        j["rate"] = {{"form", to_string(v.rate->form)}, {"value", v.rate->value}};
    }
    j["residual"] = v.residual;
    return j;
}

} // namespace

Instance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("instance document: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ParseError("instance document: top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "atoms" && key != "weight" && key != "basis")
            throw ParseError("instance document: unknown section '" + key + "'");

    const json& atoms_j = require_field(doc, "atoms", "instance document");
    const json& weight_j = require_field(doc, "weight", "instance document");
    const json& basis_j = require_field(doc, "basis", "instance document");
    if (!atoms_j.is_array()) throw ParseError("'atoms' must be an array");
    if (!weight_j.is_object()) throw ParseError("'weight' must be an object");
    if (!basis_j.is_array()) throw ParseError("'basis' must be an array");

    std::vector<Atom> atoms;
    atoms.reserve(atoms_j.size());
    for (std::size_t i = 0; i < atoms_j.size(); ++i) {
        const json& a = atoms_j[i];
        const std::string where = "atoms[" + std::to_string(i) + "]";
        if (!a.is_object()) throw ParseError(where + ": expected an object");
        const json& id = require_field(a, "id", where);
        if (!id.is_string()) throw ParseError(where + ".id: expected a string");
        atoms.push_back({id.get<std::string>(),
                         rational_from_json(require_field(a, "measure", where),
                                            where + ".measure")});
    }

    std::vector<std::pair<std::string, Rational>> weights;
    weights.reserve(weight_j.size());
    for (const auto& [id, value] : weight_j.items())
        weights.emplace_back(id, rational_from_json(value, "weight['" + id + "']"));

    std::vector<Instance::NamedIdSet> basis;
    basis.reserve(basis_j.size());
    for (std::size_t i = 0; i < basis_j.size(); ++i) {
        const json& b = basis_j[i];
        const std::string where = "basis[" + std::to_string(i) + "]";
        if (!b.is_object()) throw ParseError(where + ": expected an object");
        const json& name = require_field(b, "name", where);
        if (!name.is_string()) throw ParseError(where + ".name: expected a string");
        const json& ids = require_field(b, "atoms", where);
        if (!ids.is_array()) throw ParseError(where + ".atoms: expected an array of ids");
        std::vector<std::string> set;
        set.reserve(ids.size());
        for (const json& id : ids) {
            if (!id.is_string()) throw ParseError(where + ".atoms: expected string ids");
            set.push_back(id.get<std::string>());
        }
        basis.emplace_back(name.get<std::string>(), std::move(set));
    }
    return Instance::from_named(std::move(atoms), weights, basis);
}

Instance parse_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
    json doc;
    json atoms = json::array();
    json weight = json::object();
    for (std::size_t i = 0; i < inst.atom_count(); ++i) {
        const auto a = static_cast<std::int32_t>(i);
        atoms.push_back({{"id", inst.atom_id(a)}, {"measure", inst.measure(a).str()}});
        weight[inst.atom_id(a)] = inst.weight(a).str();
    }
    json basis = json::array();
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        json ids = json::array();
        for (const std::int32_t a : inst.base_atoms(bi)) ids.push_back(inst.atom_id(a));
        basis.push_back({{"name", inst.base_name(bi)}, {"atoms", ids}});
    }
    doc["atoms"] = std::move(atoms);
    doc["weight"] = std::move(weight);
    doc["basis"] = std::move(basis);
    return doc.dump(2) + "\n";
}

json report_to_json(const Instance& inst, const ConstantReport& report) {
    json j;
    j["type"] = "constant_report";
    j["condition"] = to_string(report.condition);
    j["params"] = params_to_json(report.params);
    j["backend"] = to_string(report.backend);
    j["overall"] = value_to_json(report.overall);
    json per_base = json::array();
    for (const auto& [b, v] : report.per_base)
        per_base.push_back({{"base", inst.base_name(b)}, {"value", value_to_json(v)}});
    j["per_base"] = std::move(per_base);
    if (!report.per_s.empty()) {
        json per_s = json::array();
        for (const auto& [s, v] : report.per_s)
            per_s.push_back({{"s", s.str()}, {"value", value_to_json(v)}});
        j["per_s"] = std::move(per_s);
    }
    json w = json::object();
    if (report.witness.base >= 0) w["base"] = inst.base_name(report.witness.base);
    if (!report.witness.subset.empty()) {
        json ids = json::array();
        for (const std::int32_t a : report.witness.subset) ids.push_back(inst.atom_id(a));
        w["subset"] = std::move(ids);
    }
    if (report.witness.lambda) w["lambda"] = report.witness.lambda->str();
    if (report.witness.s) w["s"] = report.witness.s->str();
    j["witness"] = std::move(w);
    return j;
}

std::string report_to_csv(const Instance& inst, const ConstantReport& report) {
    std::string out = "condition,params,base,value,backend\n";
    const std::string cond = to_string(report.condition);
    const std::string params = report.params.str();
    for (const auto& [b, v] : report.per_base)
        out += cond + "," + csv_field(params) + "," + csv_field(inst.base_name(b)) + "," +
               value_to_csv(v) + "," + to_string(report.backend) + "\n";
    out += cond + "," + csv_field(params) + ",(overall)," + value_to_csv(report.overall) + "," +
           to_string(report.backend) + "\n";
    if (!report.per_s.empty()) {
        out += "\ns,value\n";
        for (const auto& [s, v] : report.per_s) out += s.str() + "," + value_to_csv(v) + "\n";
    }
    if (report.witness.base >= 0) {
        out += "# witness base=" + inst.base_name(report.witness.base);
        if (report.witness.lambda) out += " lambda=" + report.witness.lambda->str();
        if (report.witness.s) out += " s=" + report.witness.s->str();
        if (!report.witness.subset.empty()) {
            out += " subset=";
            for (std::size_t i = 0; i < report.witness.subset.size(); ++i) {
                if (i) out += '|';
                out += inst.atom_id(report.witness.subset[i]);
            }
        }
        out += "\n";
    }
    return out;
}

json profile_to_json(const std::string& family, ConditionId condition,
                     const ConditionParams& params, bool cumulative,
                     const FamilyProfile& profile) {
    json j;
    j["type"] = "family_profile";
    j["family"] = family;
    j["condition"] = to_string(condition);
    j["params"] = params_to_json(params);
    j["cumulative"] = cumulative;
    json points = json::array();
    for (const ProfilePoint& p : profile.points)
        points.push_back({{"n", p.level}, {"value", value_to_json(p.value)}});
    j["points"] = std::move(points);
    j["verdict"] = verdict_to_json(profile.verdict);
    return j;
}

std::string profile_to_csv(const std::string& family, ConditionId condition,
                           const ConditionParams& params, const FamilyProfile& profile) {
    std::string out = "family,n,condition,params,constant,backend\n";
    for (const ProfilePoint& p : profile.points) {
        const char* backend =
            p.value.is_infinite() || p.value.is_exact() ? "exact" : "float";
        out += family + "," + std::to_string(p.level) + "," + to_string(condition) + "," +
               csv_field(params.str()) + "," + value_to_csv(p.value) + "," + backend + "\n";
    }
    const GrowthVerdict& v = profile.verdict;
    out += std::string("# verdict=") + to_string(v.kind);
    if (v.rate)
        out += std::string(" rate_form=") + to_string(v.rate->form) +
               " rate_value=" + float_repr(v.rate->value);
    out += " residual=" + float_repr(v.residual) + "\n";
    return out;
}

json check_table_to_json(const CheckTableReport& report) {
    json j;
    j["type"] = "check_table";
    j["ok"] = report.ok;
    json cells = json::array();
    for (const RelationEntry& cell : report.cells) {
        json c;
        c["source"] = to_string(cell.source);
        c["target"] = to_string(cell.target);
        c["status"] = to_string(cell.status);
        c["provenance"] = cell.provenance;
        if (!cell.note.empty()) c["note"] = cell.note;
        c["witnessed"] = cell.witness.has_value();
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    json equivalences = json::array();
    for (const auto& [a, b] : equivalence_pairs())
        equivalences.push_back({{"left", to_string(a)},
                                {"right", to_string(b)},
                                {"provenance", "DMO16 Theorem 3.1"}});
    j["equivalences"] = std::move(equivalences);
    json witnesses = json::array();
    for (const WitnessCheck& w : report.witnesses) {
        json c;
        c["source"] = to_string(w.source);
        c["target"] = to_string(w.target);
        c["family"] = w.family;
        c["bounded_condition"] = to_string(w.bounded_condition);
        c["bounded_params"] = params_to_json(w.bounded_params);
        c["bound"] = w.bound.str();
        json bp = json::array();
        for (const ProfilePoint& p : w.bounded_points)
            bp.push_back({{"n", p.level}, {"value", value_to_json(p.value)}});
        c["bounded_points"] = std::move(bp);
        json dp = json::array();
        for (const ProfilePoint& p : w.diverging_points)
            dp.push_back({{"n", p.level}, {"value", value_to_json(p.value)}});
        c["diverging_points"] = std::move(dp);
        c["diverging_verdict"] = verdict_to_json(w.diverging_verdict);
        c["bounded_ok"] = w.bounded_ok;
        c["floor_ok"] = w.floor_ok;
        c["divergent_ok"] = w.divergent_ok;
        c["ok"] = w.ok();
        if (!w.failures.empty()) c["failures"] = w.failures;
        witnesses.push_back(std::move(c));
    }
    j["witnesses"] = std::move(witnesses);
    return j;
}

std::string check_table_to_csv(const CheckTableReport& report) {
    std::string out = "source,target,status,provenance,verified\n";
    for (const RelationEntry& cell : report.cells) {
        std::string verified;
        if (cell.witness) {
            for (const WitnessCheck& w : report.witnesses)
                if (w.source == cell.source && w.target == cell.target)
                    verified = w.ok() ? "pass" : "fail";
        }
        out += std::string(to_string(cell.source)) + "," + to_string(cell.target) + "," +
               to_string(cell.status) + "," + csv_field(cell.provenance) + "," + verified +
               "\n";
    }
    out += "\nfamily,n,condition,value\n";
    for (const WitnessCheck& w : report.witnesses) {
        for (const ProfilePoint& p : w.bounded_points)
            out += w.family + "," + std::to_string(p.level) + "," +
                   to_string(w.bounded_condition) + "," + value_to_csv(p.value) + "\n";
        for (const ProfilePoint& p : w.diverging_points)
            out += w.family + "," + std::to_string(p.level) + "," + to_string(w.target) + "," +
                   value_to_csv(p.value) + "\n";
    }
    out += std::string("# ok=") + (report.ok ? "true" : "false") + "\n";
    return out;
}

json lifted_to_json(const LiftedInstance& lifted) {
    json j;
    j["type"] = "lifted_instance";
    json intervals = json::array();
    for (const auto& seg : lifted.intervals)
        intervals.push_back({{"left", seg.left.str()},
                             {"right", seg.right.str()},
                             {"weight", seg.weight.str()}});
    j["intervals"] = std::move(intervals);
    json basis = json::array();
    for (const auto& [name, set] : lifted.basis) {
        json idx = json::array();
        for (const std::int32_t k : set) idx.push_back(k);
        basis.push_back({{"name", name}, {"intervals", idx}});
    }
    j["basis"] = std::move(basis);
    return j;
}

std::string lifted_to_csv(const LiftedInstance& lifted) {
    std::string out = "interval,left,right,weight\n";
    for (std::size_t k = 0; k < lifted.intervals.size(); ++k) {
        const auto& seg = lifted.intervals[k];
        out += std::to_string(k) + "," + seg.left.str() + "," + seg.right.str() + "," +
               seg.weight.str() + "\n";
    }
    out += "\nbase,name,intervals\n";
    for (std::size_t b = 0; b < lifted.basis.size(); ++b) {
        out += std::to_string(b) + "," + csv_field(lifted.basis[b].first) + ",";
        const auto& set = lifted.basis[b].second;
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (i) out += '|';
            out += std::to_string(set[i]);
        }
        out += "\n";
    }
    return out;
}

namespace {

struct CommonOpts {
    std::string instance_path, family, out_path;
    long n_max = 0;
    bool cumulative = false;
    std::string output = "structured";
};

struct ParamOpts {
    std::string condition, p, q, delta, alpha, beta, s_grid, strategy = "auto";
};

void add_source_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--instance", o.instance_path, "instance document path");
    cmd->add_option("--name", o.family, "built-in family name (lemma1|lemma2|lemma3)");
    cmd->add_option("--n-max", o.n_max, "family level to build (with --name)");
    cmd->add_flag("--cumulative", o.cumulative, "union of family levels 1..N");
}

void add_output_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--output", o.output, "report format")
        ->check(CLI::IsMember({"structured", "csv"}));
    cmd->add_option("--out", o.out_path, "write the report to this file instead of stdout");
}

void add_param_opts(CLI::App* cmd, ParamOpts& p, bool condition_required) {
    auto* c = cmd->add_option("--condition", p.condition,
                              "condition id (P1, P1', P2, P2', P3, P3', P4, P4', P5-P8)");
    if (condition_required) c->required();
    cmd->add_option("--p", p.p, "exponent p for P1 (rational > 1)");
    cmd->add_option("--q", p.q, "exponent q for P3 (rational > 1)");
    cmd->add_option("--delta", p.delta, "exponent delta for P1'/P3' (rational > 0)");
    cmd->add_option("--alpha", p.alpha, "threshold alpha for P4/P4' (rational in (0,1))");
    cmd->add_option("--beta", p.beta, "level scale beta for P8 (rational > 0)");
    cmd->add_option("--s-grid", p.s_grid,
                    "comma-separated rationals in (0,1) for P2' (default "
                    "1/1000,1/100,1/10,1/4,1/2,3/4,9/10)");
    cmd->add_option("--strategy", p.strategy, "subset search strategy")
        ->check(CLI::IsMember({"auto", "brute", "class-exact", "level-set"}));
}

ConditionParams build_params(ConditionId id, const ParamOpts& p) {
    ConditionParams params;
    if (!p.p.empty()) params.p = Rational::from_string(p.p);
    if (!p.q.empty()) params.q = Rational::from_string(p.q);
    if (!p.delta.empty()) params.delta = Rational::from_string(p.delta);
    if (!p.alpha.empty()) params.alpha = Rational::from_string(p.alpha);
    if (!p.beta.empty()) params.beta = Rational::from_string(p.beta);
    if (!p.s_grid.empty()) {
        std::vector<Rational> grid;
        std::stringstream ss(p.s_grid);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(Rational::from_string(item));
        params.s_grid = std::move(grid);
    } else if (id == ConditionId::P2Prime) {
        params.s_grid = std::vector<Rational>{Rational(1, 1000), Rational(1, 100),
                                              Rational(1, 10),   Rational(1, 4),
                                              Rational(1, 2),    Rational(3, 4),
                                              Rational(9, 10)};
    }
    return params;
}

Instance load_instance(const CommonOpts& o) {
    const bool have_file = !o.instance_path.empty();
    const bool have_family = !o.family.empty();
    if (have_file == have_family)
        throw std::invalid_argument("give exactly one of --instance or --name");
    if (have_file) return parse_instance_file(o.instance_path);
    if (o.n_max <= 0) throw std::invalid_argument("--name requires --n-max >= 1");
    return make_family({o.family, o.n_max, o.cumulative});
}

void emit(const CommonOpts& o, std::ostream& out, const std::string& text) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path);
    if (!f) throw Error("cannot open output file '" + o.out_path + "'");
    f << text;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tightest-constant calculator for A-infinity weight conditions "
                 "over general bases"};
    app.require_subcommand(1);

    CommonOpts eval_o, family_o, table_o, lift_o;
    ParamOpts eval_p, family_p;

    auto* eval_cmd =
        app.add_subcommand("eval", "evaluate one condition on an instance");
    add_source_opts(eval_cmd, eval_o);
    add_param_opts(eval_cmd, eval_p, true);
    add_output_opts(eval_cmd, eval_o);

    auto* family_cmd = app.add_subcommand(
        "family", "profile a condition across family levels 1..N and classify growth");
    family_cmd->add_option("--name", family_o.family, "family name")->required();
    family_cmd->add_option("--n-max", family_o.n_max, "top level N")->required();
    family_cmd->add_flag("--cumulative", family_o.cumulative,
                         "evaluate each level as the union of levels 1..n");
    add_param_opts(family_cmd, family_p, true);
    add_output_opts(family_cmd, family_o);

    auto* table_cmd = app.add_subcommand(
        "check-table", "verify the implication table against the built-in witness families");
    add_output_opts(table_cmd, table_o);

    auto* lift_cmd =
        app.add_subcommand("lift", "print the half-line representation of an instance");
    add_source_opts(lift_cmd, lift_o);
    add_output_opts(lift_cmd, lift_o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (eval_cmd->parsed()) {
            const auto id = parse_condition(eval_p.condition);
            if (!id) throw std::invalid_argument("unknown condition '" + eval_p.condition + "'");
            const auto strategy = parse_strategy(eval_p.strategy);
            if (!strategy)
                throw std::invalid_argument("unknown strategy '" + eval_p.strategy + "'");
            const Instance inst = load_instance(eval_o);
            const ConditionParams params = build_params(*id, eval_p);
            const ConstantReport report = evaluate(inst, *id, params, *strategy);
            emit(eval_o, out,
                 eval_o.output == "csv" ? report_to_csv(inst, report)
                                        : report_to_json(inst, report).dump(2) + "\n");
            return 0;
        }
        if (family_cmd->parsed()) {
            const auto id = parse_condition(family_p.condition);
            if (!id)
                throw std::invalid_argument("unknown condition '" + family_p.condition + "'");
            const auto strategy = parse_strategy(family_p.strategy);
            if (!strategy)
                throw std::invalid_argument("unknown strategy '" + family_p.strategy + "'");
            if (family_o.n_max <= 0) throw std::invalid_argument("--n-max must be >= 1");
            const ConditionParams params = build_params(*id, family_p);
            std::vector<long> levels;
            for (long n = 1; n <= family_o.n_max; ++n) levels.push_back(n);
            const FamilyProfile profile = family_profile(
                *id, params, family_o.family, levels, family_o.cumulative, *strategy);
            emit(family_o, out,
                 family_o.output == "csv"
                     ? profile_to_csv(family_o.family, *id, params, profile)
                     : profile_to_json(family_o.family, *id, params, family_o.cumulative,
                                       profile)
                               .dump(2) +
                           "\n");
            return 0;
        }
        if (table_cmd->parsed()) {
            const CheckTableReport report = check_table();
            emit(table_o, out,
                 table_o.output == "csv" ? check_table_to_csv(report)
                                         : check_table_to_json(report).dump(2) + "\n");
            return report.ok ? 0 : 1;
        }
        if (lift_cmd->parsed()) {
            const Instance inst = load_instance(lift_o);
            const LiftedInstance lifted = lift(inst);
            emit(lift_o, out,
                 lift_o.output == "csv" ? lifted_to_csv(lifted)
                                        : lifted_to_json(lifted).dump(2) + "\n");
            return 0;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace ainfty
