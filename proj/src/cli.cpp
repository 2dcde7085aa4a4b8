#include "diastasis/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>

#include <CLI11.hpp>

#include "diastasis/acceptance.hpp"
#include "diastasis/calabi.hpp"
#include "diastasis/cone.hpp"
#include "diastasis/corpus.hpp"
#include "diastasis/curvature.hpp"
#include "diastasis/errors.hpp"
#include "diastasis/report.hpp"

namespace diastasis {

namespace {

using report::Json;

constexpr unsigned default_order = 4;
constexpr unsigned max_order = 16;
constexpr const char* order_env = "DIASTASIS_ORDER";

struct Options {
    std::optional<unsigned> order;
    std::string json_path;
    std::string potential;
    std::string psi;
    std::string a = "1";
    std::string c = "1";
    std::string epsilon;
    unsigned K = 4;
    unsigned max_k = 4;
};

// Key/value rows for the human table plus the structured result.
struct Outcome {
    ExitCode code = ExitCode::Positive;
    std::vector<std::pair<std::string, std::string>> rows;
    Json inputs = Json::object();
    Json result = Json::object();
};

unsigned resolve_order(const Options& o)
{
    unsigned d = default_order;
    if (o.order) {
        d = *o.order;
    } else if (const char* env = std::getenv(order_env); env && *env) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(env, &used);
            if (used != std::string_view(env).size())
                throw std::invalid_argument("trailing characters");
            d = unsigned(v);
        } catch (const std::exception&) {
            throw DomainError(std::string(order_env) + " must be a nonnegative integer, got '" + env + "'");
        }
    }
    if (d < 1 || d > max_order)
        throw DomainError("order must be between 1 and " + std::to_string(max_order));
    return d;
}

Rational positive_rational(const std::string& text, const char* flag)
{
    const Rational r = parse_rational(text);
    if (sgn(r) <= 0)
        throw DomainError(std::string(flag) + " must be positive, got " + text);
    return r;
}

const char* yes_no(bool b)
{
    return b ? "yes" : "no";
}

std::string join_support(const NegativityWitness& w, const GradedOrder& order)
{
    std::string s;
    for (std::size_t i = 0; i < w.vector.size(); ++i) {
        if (w.vector[i].is_zero())
            continue;
        if (!s.empty())
            s += " + ";
        s += "(" + to_string(w.vector[i]) + ")e" + to_string(order.monomial(i));
    }
    return s;
}

void verdict_rows(Outcome& o, const std::string& prefix, const InducibilityVerdict& v, const GradedOrder& order)
{
    o.rows.emplace_back(prefix + "verdict", report::verdict_label(v));
    if (const auto* c = std::get_if<ConsistentUpTo>(&v)) {
        o.rows.emplace_back(prefix + "rank lower bound", std::to_string(c->rank_lower_bound));
        return;
    }
    const auto& ni = std::get<NotInduced>(v);
    if (ni.radial_weight)
        o.rows.emplace_back(prefix + "radial weight", std::to_string(*ni.radial_weight));
    o.rows.emplace_back(prefix + "witness value", to_string(ni.witness.value));
    o.rows.emplace_back(prefix + "witness", join_support(ni.witness, order));
}

ExitCode verdict_code(const InducibilityVerdict& v)
{
    return is_not_induced(v) ? ExitCode::Negative : ExitCode::Positive;
}

std::string lowest_term(const HermitianSeries& s)
{
    if (s.is_zero())
        return "0";
    const auto& [key, c] = *s.terms().begin();
    return "(" + to_string(c) + ") z^" + to_string(s.order().monomial(key.first)) + " zbar^"
        + to_string(s.order().monomial(key.second));
}

ParsedPotential load(Outcome& o, const char* role, const std::string& arg, unsigned d)
{
    if (arg.empty())
        throw DomainError(std::string("--") + role + " is required");
    auto p = parse_potential(arg, d);
    o.inputs[role] = report::input(p);
    o.rows.emplace_back(role, p.source + " (n=" + std::to_string(p.series.n()) + ", kahler at 0: "
            + yes_no(p.kahler_at_origin) + ")");
    return p;
}

Outcome analyze(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "potential", opt.potential, d);
    const auto v = inducibility(p.series, d);
    const auto order = GradedOrder::make(p.series.n(), d);
    verdict_rows(o, "", v, *order);
    o.result["verdict"] = report::verdict(v, *order);
    o.code = verdict_code(v);
    return o;
}

Outcome multiple(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "potential", opt.potential, d);
    const auto search = find_inducing_multiple(p.series, opt.max_k, d);
    const auto order = GradedOrder::make(p.series.n(), d);
    o.rows.emplace_back("max k", std::to_string(opt.max_k));
    o.rows.emplace_back("inducing multiple", search.k ? std::to_string(*search.k) : "none");
    o.result["max_k"] = opt.max_k;
    o.result["k"] = search.k ? Json(*search.k) : Json(nullptr);
    Json failures = Json::array();
    for (const auto& [k, ni] : search.failures) {
        o.rows.emplace_back("k=" + std::to_string(k), report::verdict_label(ni) + " value " + to_string(ni.witness.value));
        Json f;
        f["k"] = k;
        f["verdict"] = report::verdict(ni, *order);
        failures.push_back(std::move(f));
    }
    o.result["failures"] = std::move(failures);
    o.code = search.k ? ExitCode::Positive : ExitCode::Negative;
    return o;
}

void cone_rows(Outcome& o, const std::string& prefix, const ConePotential& cp, unsigned K, unsigned d, Json& into)
{
    const auto v = cone_inducibility(cp, K, d);
    const auto order = GradedOrder::make(cp.n(), d);
    o.rows.emplace_back(prefix + "c", to_string(cp.c()));
    verdict_rows(o, prefix, v, *order);
    into["c"] = report::rational(cp.c());
    into["verdict"] = report::verdict(v, *order);
    o.code = verdict_code(v);
}

Outcome lift_command(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "psi", opt.psi, d);
    const auto cp = lift(p.series, positive_rational(opt.a, "--a"));
    o.result["K"] = opt.K;
    cone_rows(o, "", cp, opt.K, d, o.result);
    const auto base = inducibility(p.series.scaled(cp.c()), d);
    o.rows.emplace_back("verdict of c psi", report::verdict_label(base));
    o.result["base_verdict_class"] = is_not_induced(base) ? "NotInduced" : "ConsistentUpTo";
    return o;
}

Outcome homothety_command(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "psi", opt.psi, d);
    const ConePotential before(positive_rational(opt.c, "--c"), p.series);
    const auto after = homothety(before, positive_rational(opt.a, "--a"));
    o.result["K"] = opt.K;
    o.result["a"] = opt.a;
    Json b, a;
    cone_rows(o, "before: ", before, opt.K, d, b);
    cone_rows(o, "after: ", after, opt.K, d, a);
    o.result["before"] = std::move(b);
    o.result["after"] = std::move(a);
    return o;
}

Outcome blocks(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "psi", opt.psi, d);
    const ConePotential cp(positive_rational(opt.c, "--c"), p.series);
    const auto rb = radial_blocks(cp, opt.K, d);
    const auto order = GradedOrder::make(cp.n(), d);
    o.rows.emplace_back("c", to_string(cp.c()));
    o.result["c"] = report::rational(cp.c());
    o.result["K"] = opt.K;
    Json list = Json::array();
    for (std::size_t i = 0; i < rb.blocks.size(); ++i) {
        const auto verdict = psd_check_exact(rb.blocks[i]);
        Json entry;
        entry["k"] = i + 1;
        entry["dim"] = rb.blocks[i].dim();
        entry["check"] = report::psd(verdict, *order);
        list.push_back(std::move(entry));
        std::string cell;
        if (const auto* cert = std::get_if<PsdCertificate>(&verdict)) {
            cell = "psd, rank " + std::to_string(cert->rank);
        } else {
            cell = "indefinite, value " + to_string(std::get<NegativityWitness>(verdict).value);
            o.code = ExitCode::Negative;
        }
        o.rows.emplace_back("B_" + std::to_string(i + 1), cell);
    }
    o.result["blocks"] = std::move(list);
    return o;
}

Rational max_abs_deviation(const HermitianMatrix& a, const HermitianMatrix& b)
{
    Rational m = 0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const Coefficient diff = a(i, j) - b(i, j);
            m = std::max({m, Rational(abs(diff.re)), Rational(abs(diff.im))});
        }
    return m;
}

Outcome epsilon(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "psi", opt.psi, d);
    if (opt.epsilon.empty())
        throw DomainError("--epsilon is required");
    const ConePotential cp(positive_rational(opt.c, "--c"), p.series);
    const auto sub = epsilon_submatrix(cp, positive_rational(opt.epsilon, "--epsilon"), d);
    const auto limit = epsilon_limit_matrix(cp, d);
    const auto order = GradedOrder::make(cp.n(), d);
    const auto v_check = psd_check_exact(sub.v);
    const auto limit_check = psd_check_exact(limit);
    const auto dev = max_abs_deviation(sub.v, limit);
    o.rows.emplace_back("c", to_string(cp.c()));
    o.rows.emplace_back("epsilon", to_string(sub.epsilon));
    o.rows.emplace_back("epsilon^(2c)", to_string(sub.epsilon_power));
    o.rows.emplace_back("v psd", yes_no(is_psd(v_check)));
    o.rows.emplace_back("limit psd", yes_no(is_psd(limit_check)));
    o.rows.emplace_back("max |v - limit|", to_string(dev));
    o.result["c"] = report::rational(cp.c());
    o.result["epsilon"] = report::rational(sub.epsilon);
    o.result["epsilon_power"] = report::rational(sub.epsilon_power);
    o.result["v"] = report::psd(v_check, *order);
    o.result["limit"] = report::psd(limit_check, *order);
    o.result["max_abs_deviation"] = report::rational(dev);
    o.code = is_psd(v_check) ? ExitCode::Positive : ExitCode::Negative;
    return o;
}

Outcome ricci(const Options& opt, unsigned d)
{
    Outcome o;
    if (opt.potential.empty() == opt.psi.empty())
        throw DomainError("ricci takes exactly one of --potential or --psi");
    const RicciFlatness r = [&] {
        if (!opt.potential.empty())
            return ricci_flat_check(load(o, "potential", opt.potential, d + 1).series, d);
        const auto p = load(o, "psi", opt.psi, d + 1);
        const ConePotential cp(positive_rational(opt.c, "--c"), p.series);
        o.rows.emplace_back("c", to_string(cp.c()));
        o.result["c"] = report::rational(cp.c());
        return ricci_flat_check(cp, d);
    }();
    o.rows.emplace_back("ricci-flat through order", std::to_string(d) + ": " + yes_no(r.flat));
    o.rows.emplace_back("lowest residual term", lowest_term(r.residual));
    o.result["ricci_flat"] = r.flat;
    o.result["residual_terms"] = r.residual.terms().size();
    o.result["lowest_residual_term"] = lowest_term(r.residual);
    o.code = r.flat ? ExitCode::Positive : ExitCode::Negative;
    return o;
}

Outcome einstein(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "potential", opt.potential, d + 1);
    const auto r = ricci_report(p.series, d);
    o.rows.emplace_back("lambda", r.lambda ? to_string(*r.lambda) : "none");
    if (r.first_mismatch)
        o.rows.emplace_back("first mismatch", *r.first_mismatch);
    o.result["lambda"] = r.lambda ? report::rational(*r.lambda) : Json(nullptr);
    o.result["first_mismatch"] = r.first_mismatch ? Json(*r.first_mismatch) : Json(nullptr);
    o.result["residual_zero"] = r.residual.is_zero();
    o.code = r.lambda ? ExitCode::Positive : ExitCode::Negative;
    return o;
}

Outcome bridge(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "psi", opt.psi, d + 1);
    const auto b = sasaki_einstein_bridge(p.series, positive_rational(opt.a, "--a"), d);
    o.rows.emplace_back("c", to_string(b.c));
    o.rows.emplace_back("lambda_base", b.lambda_base ? to_string(*b.lambda_base) : "none");
    o.rows.emplace_back("base Kahler-Einstein with 2n+2", yes_no(b.base_is_ke_2n2));
    o.rows.emplace_back("cone Ricci-flat", yes_no(b.cone_ricci_flat));
    o.rows.emplace_back("consistent", yes_no(b.consistent));
    o.result["c"] = report::rational(b.c);
    o.result["lambda_base"] = b.lambda_base ? report::rational(*b.lambda_base) : Json(nullptr);
    o.result["base_is_ke_2n2"] = b.base_is_ke_2n2;
    o.result["cone_ricci_flat"] = b.cone_ricci_flat;
    o.result["consistent"] = b.consistent;
    o.code = b.consistent ? ExitCode::Positive : ExitCode::Invariant;
    return o;
}

Outcome flatness(const Options& opt, unsigned d)
{
    Outcome o;
    const auto p = load(o, "psi", opt.psi, d);
    const ConePotential cp(positive_rational(opt.c, "--c"), p.series);
    const auto w = flatness_witness(cp, d);
    o.rows.emplace_back("c", to_string(cp.c()));
    o.rows.emplace_back("flat", yes_no(w.flat));
    if (!w.reason.empty())
        o.rows.emplace_back("reason", w.reason);
    o.result["c"] = report::rational(cp.c());
    o.result["flat"] = w.flat;
    o.result["reason"] = w.reason;
    o.result["substituted"] = w.substituted ? Json::parse(serialize_potential(*w.substituted)) : Json(nullptr);
    o.code = w.flat ? ExitCode::Positive : ExitCode::Negative;
    return o;
}

Outcome selftest(std::ostream& out)
{
    Outcome o;
    Json list = Json::array();
    bool all = true;
    acceptance::run_all([&](const acceptance::CriterionResult& r) {
        out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << ": " << r.detail << " ("
            << std::fixed << std::setprecision(2) << r.seconds << " s)" << std::endl;
        all = all && r.passed;
        Json j;
        j["id"] = r.id;
        j["title"] = r.title;
        j["passed"] = r.passed;
        j["detail"] = r.detail;
        list.push_back(std::move(j));
    });
    o.result["criteria"] = std::move(list);
    o.result["passed"] = all;
    o.code = all ? ExitCode::Positive : ExitCode::Negative;
    return o;
}

void print_table(std::ostream& out, const std::string& command, unsigned d, const Outcome& o)
{
    std::vector<std::pair<std::string, std::string>> rows{{"command", command}, {"order", std::to_string(d)}};
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    std::size_t width = 0;
    for (const auto& r : rows)
        width = std::max(width, r.first.size());
    for (const auto& [k, v] : rows)
        out << std::left << std::setw(int(width) + 2) << k << v << '\n';
}

// Temp file and rename, so a failed run never leaves a partial report.
void write_report(const std::string& path, const Json& doc)
{
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw DomainError("cannot write " + tmp.string());
        f << doc.dump(2) << '\n';
        if (!f)
            throw DomainError("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DomainError("cannot write " + path);
    }
}

Json echo(const std::string& command, const CLI::App& sub, unsigned d)
{
    Json args;
    args["order"] = d;
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "json" || name == "order" || opt->count() == 0)
            continue;
        args[name] = opt->as<std::string>();
    }
    Json e;
    e["command"] = command;
    e["arguments"] = std::move(args);
    return e;
}

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact Calabi-diastasis certification of Kähler potentials and their cones", "diastasis"};
    app.require_subcommand(1);
    Options opt;

    using Runner = std::function<Outcome(const Options&, unsigned)>;
    std::vector<std::pair<CLI::App*, Runner>> commands;

    auto add = [&](const char* name, const char* help, Runner run) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--order", opt.order, "Truncation order d (default: $" + std::string(order_env) + " or 4)");
        sub->add_option("--json", opt.json_path, "Also write the structured report to this path");
        commands.emplace_back(sub, std::move(run));
        return sub;
    };
    auto potential = [&](CLI::App* s) { s->add_option("--potential", opt.potential, "Builtin name or potential file")->required(); };
    auto psi = [&](CLI::App* s) { s->add_option("--psi", opt.psi, "Base potential: builtin name or file")->required(); };
    auto c_flag = [&](CLI::App* s) { s->add_option("--c", opt.c, "Radial exponent c as p/q (default 1)"); };
    auto K_flag = [&](CLI::App* s) { s->add_option("--K", opt.K, "Number of radial blocks (default 4)")->check(CLI::Range(1u, 64u)); };

    potential(add("analyze", "Calabi criterion for a potential", analyze));
    auto* m = add("multiple", "Smallest k with k*phi not obstructed", multiple);
    potential(m);
    m->add_option("--max-k", opt.max_k, "Largest multiple tried (default 4)")->check(CLI::Range(1u, 64u));
    auto* l = add("lift", "Cone over psi with c = 1/a", lift_command);
    psi(l);
    l->add_option("--a", opt.a, "Homothety parameter a as p/q (default 1)");
    K_flag(l);
    auto* h = add("homothety", "Cone verdict before and after c -> c*a", homothety_command);
    psi(h);
    c_flag(h);
    h->add_option("--a", opt.a, "Homothety parameter a as p/q (default 1)");
    K_flag(h);
    auto* b = add("blocks", "Radial blocks of the cone", blocks);
    psi(b);
    c_flag(b);
    K_flag(b);
    auto* e = add("epsilon", "Epsilon submatrix of the cone diastasis", epsilon);
    psi(e);
    c_flag(e);
    e->add_option("--epsilon", opt.epsilon, "Base point z0 = epsilon as p/q")->required();
    auto* r = add("ricci", "Ricci-flatness of a potential or of the cone over psi", ricci);
    r->add_option("--potential", opt.potential, "Builtin name or potential file");
    r->add_option("--psi", opt.psi, "Base potential of an integer-c cone");
    c_flag(r);
    potential(add("einstein", "Einstein constant of a potential", einstein));
    auto* br = add("bridge", "Base Kähler-Einstein versus cone Ricci-flat", bridge);
    psi(br);
    br->add_option("--a", opt.a, "Homothety parameter a as p/q (default 1)");
    auto* f = add("flatness", "Flatness of the cone under z_j -> z_j / z0", flatness);
    psi(f);
    c_flag(f);
    CLI::App* self = app.add_subcommand("selftest", "Run the acceptance suite");
    self->add_option("--json", opt.json_path, "Also write the structured report to this path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? 0 : int(ExitCode::Usage);
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        std::string command;
        unsigned d = 0;
        Outcome o;
        Json doc;
        doc["schema"] = report::schema;
        if (self->parsed()) {
            command = "selftest";
            o = selftest(out);
            doc["command"] = command;
            doc["arguments"] = Json::object();
        } else {
            for (const auto& [sub, run] : commands) {
                if (!sub->parsed())
                    continue;
                command = sub->get_name();
                d = resolve_order(opt);
                o = run(opt, d);
                const Json e = echo(command, *sub, d);
                doc["command"] = e["command"];
                doc["arguments"] = e["arguments"];
            }
        }
        doc["conventions"] = report::conventions();
        doc["inputs"] = o.inputs;
        doc["result"] = o.result;
        doc["exit_code"] = int(o.code);
        if (!opt.json_path.empty())
            write_report(opt.json_path, doc);
        if (!self->parsed())
            print_table(out, command, d, o);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        err << "time " << std::fixed << std::setprecision(3) << secs << " s\n";
        return int(o.code);
    } catch (const InvariantError& ex) {
        err << "internal error: " << ex.what() << '\n';
        return int(ExitCode::Invariant);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return int(ExitCode::Usage);
    } catch (const std::exception& ex) {
        err << "internal error: " << ex.what() << '\n';
        return int(ExitCode::Invariant);
    }
}

} // namespace diastasis
