#include "espsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "espsim/baselines.hpp"
#include "espsim/numeric.hpp"

namespace espsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

[[noreturn]] void fail(const std::string& file, int line, const std::string& field,
                       const std::string& msg) {
    throw ScenarioError(file + ":" + std::to_string(line) + ": field '" + field +
                        "': " + msg);
}

double parse_real(const std::string& file, int line, const std::string& field,
                  const std::string& value) {
    if (value == "inf") return kInfiniteParallelism;
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(file, line, field, "'" + value + "' is not a number");
    }
}

long parse_int(const std::string& file, int line, const std::string& field,
               const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(file, line, field, "'" + value + "' is not an integer");
    }
}

std::pair<std::string, std::string> parse_range(const std::string& file, int line,
                                                const std::string& field,
                                                const std::string& value) {
    const auto pos = value.find("..");
    if (pos == std::string::npos)
        fail(file, line, field, "expected '<lo>..<hi>', got '" + value + "'");
    return {trim(value.substr(0, pos)), trim(value.substr(pos + 2))};
}

// "release=<r> phases=<w>:<h>[,<w>:<h>...]"
Job parse_job(const std::string& file, int line, const std::string& value, int id) {
    Job job;
    job.id = id;
    bool have_phases = false;
    std::istringstream in(value);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            fail(file, line, "job", "expected key=value, got '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string val = token.substr(eq + 1);
        if (key == "release") {
            job.release_time = parse_real(file, line, "job.release", val);
            if (job.release_time < 0.0 || !std::isfinite(job.release_time))
                fail(file, line, "job.release", "must be finite and >= 0");
        } else if (key == "phases") {
            for (const std::string& item : split(val, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos)
                    fail(file, line, "job.phases",
                         "expected <work>:<parallelism>, got '" + item + "'");
                Phase p;
                p.work = parse_real(file, line, "job.phases", item.substr(0, colon));
                p.parallelism =
                    parse_real(file, line, "job.phases", item.substr(colon + 1));
                if (!(p.work > 0.0) || !std::isfinite(p.work))
                    fail(file, line, "job.phases", "work must be positive and finite");
                if (!(p.parallelism >= 1.0))
                    fail(file, line, "job.phases", "parallelism must be >= 1");
                job.phases.push_back(p);
            }
            have_phases = !job.phases.empty();
        } else {
            fail(file, line, "job", "unknown key '" + key + "'");
        }
    }
    if (!have_phases) fail(file, line, "job", "needs a non-empty phases list");
    return job;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvRow {
    std::string instance_id;
    std::string policy;
    double alpha = 0.0;
    int P = 0;
    int n_jobs = 0;
    std::optional<double> F, E, M, G, H;
    std::optional<double> lower_bound, ratio, theorem_bound;
    bool bound_ok = true;
    std::optional<double> ratio_norm;
};

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

void write_row(std::string& out, const CsvRow& r, const std::string& sweep_param,
               const std::optional<double>& sweep_value) {
    out += r.instance_id + ',' + r.policy + ',' + fmt(r.alpha) + ',' +
           std::to_string(r.P) + ',' + std::to_string(r.n_jobs) + ',' +
           cell(r.F) + ',' + cell(r.E) + ',' + cell(r.M) + ',' + cell(r.G) +
           ',' + cell(r.H) + ',' + cell(r.lower_bound) + ',' + cell(r.ratio) +
           ',' + cell(r.theorem_bound) + ',' + (r.bound_ok ? "true" : "false");
    if (!sweep_param.empty())
        out += ',' + sweep_param + ',' + cell(sweep_value) + ',' +
               cell(r.ratio_norm);
    out += '\n';
}

constexpr const char* kRunHeader =
    "instance_id,policy,alpha,P,n_jobs,F,E,M,G,H,lower_bound,ratio,"
    "theorem_bound,bound_ok";

CsvRow make_game_row(const PowerParams& params, double budget,
                     const std::string& id) {
    const double b = budget < 0.0 ? 1.0 / (params.alpha - 1.0) : budget;
    const SpeedVector robust = robust_speed_vector(params, b);
    const AdversaryChoice choice = adversary_best_h(robust, params);
    const double floor = adversary_ratio_floor(params);

    CsvRow row;
    row.instance_id = id;
    row.policy = "game";
    row.alpha = params.alpha;
    row.P = params.P;
    row.n_jobs = 1;
    row.lower_bound = floor;
    row.ratio = choice.ratio;
    row.bound_ok = choice.ratio >= floor - 1e-9;
    return row;
}

// ESPSIM_SEED override first, then the generator's own seed, then the
// scenario-level fallback.
std::optional<std::uint64_t> effective_seed(
    const Scenario& scenario, const SourceSpec& source,
    std::optional<std::uint64_t> seed_override) {
    if (seed_override) return seed_override;
    if (source.random.seed) return source.random.seed;
    return scenario.seed;
}

std::vector<CsvRow> scenario_rows(const Scenario& scenario,
                                  std::optional<std::uint64_t> seed_override) {
    const PowerParams params(scenario.alpha, scenario.P);
    std::vector<CsvRow> rows;
    for (const SourceSpec& source : scenario.sources) {
        if (source.kind == SourceSpec::Kind::game) {
            rows.push_back(make_game_row(params, source.game_budget, source.id));
            continue;
        }
        const Instance instance = realize_source(
            source, params, effective_seed(scenario, source, seed_override));
        for (const std::string& policy : scenario.policies) {
            for (const Objective objective : scenario.objectives) {
                const RatioReport r =
                    ratio_harness(instance, policy, objective, source.id);
                CsvRow row;
                row.instance_id = source.id;
                row.policy = policy;
                row.alpha = scenario.alpha;
                row.P = scenario.P;
                row.n_jobs = static_cast<int>(instance.jobs.size());
                row.F = r.measured.flow_total;
                row.E = r.measured.energy;
                row.M = r.measured.makespan;
                row.G = r.measured.g;
                row.H = r.measured.h;
                row.lower_bound = r.reference;
                row.ratio = r.ratio;
                if (r.bound) row.theorem_bound = *r.bound;
                row.bound_ok = r.bound_ok;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

// ratio / ln(P)^e; the exponent matches the asymptotic claim for the row.
void attach_ratio_norm(CsvRow& row, const std::vector<Objective>& objectives,
                       std::size_t objective_index) {
    if (!row.ratio) return;
    double exponent = 0.0;
    if (row.policy == "game")
        exponent = 1.0 / row.alpha;
    else if (row.policy == "nequi")
        exponent = 1.0;
    else if (row.policy == "pfirst" &&
             objectives[objective_index] == Objective::H)
        exponent = 1.0 - 1.0 / row.alpha;
    const double denom = std::pow(std::log(static_cast<double>(row.P)), exponent);
    if (std::isfinite(denom) && denom > 0.0) row.ratio_norm = *row.ratio / denom;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& filename) {
    Scenario sc;
    sc.filename = filename;
    bool have_alpha = false, have_p = false, have_objective = false;

    SourceSpec* section = nullptr;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail(filename, line_no, "section", "missing closing ']'");
            const auto inner = trim(line.substr(1, line.size() - 2));
            const auto space = inner.find(' ');
            if (space == std::string::npos)
                fail(filename, line_no, "section",
                     "expected '[<type> <id>]', got '[" + inner + "]'");
            const std::string type = trim(inner.substr(0, space));
            const std::string id = trim(inner.substr(space + 1));
            if (id.empty()) fail(filename, line_no, "section", "empty id");
            if (id.find(',') != std::string::npos)
                fail(filename, line_no, "section", "id must not contain commas");
            SourceSpec spec;
            spec.id = id;
            spec.line = line_no;
            if (type == "instance")
                spec.kind = SourceSpec::Kind::inline_jobs;
            else if (type == "generator")
                spec.kind = SourceSpec::Kind::uniform_random;  // until kind= seen
            else if (type == "game")
                spec.kind = SourceSpec::Kind::game;
            else
                fail(filename, line_no, "section", "unknown section type '" + type +
                                                       "'");
            sc.sources.push_back(std::move(spec));
            section = &sc.sources.back();
            if (type == "generator") section->random.n_jobs = -1;  // kind unset mark
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(filename, line_no, "line", "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(filename, line_no, key.empty() ? "line" : key, "empty key or value");

        if (!section) {
            if (key == "alpha") {
                sc.alpha = parse_real(filename, line_no, key, value);
                if (!(sc.alpha > 1.0) || !std::isfinite(sc.alpha))
                    fail(filename, line_no, key, "alpha must exceed 1");
                have_alpha = true;
            } else if (key == "P") {
                sc.P = static_cast<int>(parse_int(filename, line_no, key, value));
                if (sc.P < 1) fail(filename, line_no, key, "P must be at least 1");
                have_p = true;
            } else if (key == "policies") {
                sc.policies.clear();
                for (const std::string& name : split(value, ',')) {
                    const auto& known = policy_names();
                    if (std::find(known.begin(), known.end(), name) == known.end())
                        fail(filename, line_no, key, "unknown policy '" + name + "'");
                    sc.policies.push_back(name);
                }
            } else if (key == "objective") {
                sc.objectives.clear();
                for (const std::string& o : split(value, ',')) {
                    if (o == "G")
                        sc.objectives.push_back(Objective::G);
                    else if (o == "H")
                        sc.objectives.push_back(Objective::H);
                    else
                        fail(filename, line_no, key, "objective must be G or H");
                }
                have_objective = !sc.objectives.empty();
                if (!have_objective) fail(filename, line_no, key, "empty objective list");
            } else if (key == "output") {
                sc.output = value;
            } else if (key == "seed") {
                const long s = parse_int(filename, line_no, key, value);
                if (s < 0) fail(filename, line_no, key, "seed must be >= 0");
                sc.seed = static_cast<std::uint64_t>(s);
            } else {
                fail(filename, line_no, key, "unknown top-level key");
            }
            continue;
        }

        switch (section->kind) {
            case SourceSpec::Kind::inline_jobs:
                if (key == "job")
                    section->jobs.push_back(parse_job(
                        filename, line_no, value,
                        static_cast<int>(section->jobs.size())));
                else
                    fail(filename, line_no, key, "instance sections take 'job' lines");
                break;
            case SourceSpec::Kind::game:
                if (key == "budget") {
                    section->game_budget = parse_real(filename, line_no, key, value);
                    if (!(section->game_budget > 0.0) ||
                        !std::isfinite(section->game_budget))
                        fail(filename, line_no, key, "budget must be positive and finite");
                } else {
                    fail(filename, line_no, key, "game sections take 'budget' only");
                }
                break;
            default:  // generator
                if (key == "kind") {
                    if (value == "theorem5") {
                        section->kind = SourceSpec::Kind::theorem5;
                    } else if (value == "uniform-random") {
                        section->kind = SourceSpec::Kind::uniform_random;
                        if (section->random.n_jobs < 0) section->random.n_jobs = 0;
                    } else {
                        fail(filename, line_no, key,
                             "kind must be theorem5 or uniform-random");
                    }
                } else if (key == "jobs") {
                    section->random.n_jobs =
                        static_cast<int>(parse_int(filename, line_no, key, value));
                    if (section->random.n_jobs < 1)
                        fail(filename, line_no, key, "jobs must be at least 1");
                } else if (key == "phases") {
                    const auto [lo, hi] = parse_range(filename, line_no, key, value);
                    section->random.phases_lo =
                        static_cast<int>(parse_int(filename, line_no, key, lo));
                    section->random.phases_hi =
                        static_cast<int>(parse_int(filename, line_no, key, hi));
                    if (section->random.phases_lo < 1 ||
                        section->random.phases_hi < section->random.phases_lo)
                        fail(filename, line_no, key, "need 1 <= lo <= hi");
                } else if (key == "work") {
                    const auto [lo, hi] = parse_range(filename, line_no, key, value);
                    section->random.work_lo = parse_real(filename, line_no, key, lo);
                    section->random.work_hi = parse_real(filename, line_no, key, hi);
                    if (!(section->random.work_lo > 0.0) ||
                        section->random.work_hi < section->random.work_lo ||
                        !std::isfinite(section->random.work_hi))
                        fail(filename, line_no, key, "need 0 < lo <= hi (finite)");
                } else if (key == "parallelism") {
                    const auto [lo, hi] = parse_range(filename, line_no, key, value);
                    section->random.parallelism_lo =
                        static_cast<int>(parse_int(filename, line_no, key, lo));
                    section->random.parallelism_hi =
                        static_cast<int>(parse_int(filename, line_no, key, hi));
                    if (section->random.parallelism_lo < 1 ||
                        section->random.parallelism_hi < section->random.parallelism_lo)
                        fail(filename, line_no, key, "need 1 <= lo <= hi");
                } else if (key == "parseq") {
                    if (value == "true")
                        section->random.parseq = true;
                    else if (value == "false")
                        section->random.parseq = false;
                    else
                        fail(filename, line_no, key, "expected true or false");
                } else if (key == "release_spread") {
                    section->random.release_spread =
                        parse_real(filename, line_no, key, value);
                    if (section->random.release_spread < 0.0 ||
                        !std::isfinite(section->random.release_spread))
                        fail(filename, line_no, key, "must be finite and >= 0");
                } else if (key == "seed") {
                    const long s = parse_int(filename, line_no, key, value);
                    if (s < 0) fail(filename, line_no, key, "seed must be >= 0");
                    section->random.seed = static_cast<std::uint64_t>(s);
                } else {
                    fail(filename, line_no, key, "unknown generator key");
                }
                break;
        }
    }

    if (!have_alpha) fail(filename, line_no, "alpha", "missing; alpha must exceed 1");
    if (!have_p) fail(filename, line_no, "P", "missing");
    if (sc.sources.empty()) fail(filename, line_no, "section", "no instance, generator, or game section");

    bool needs_policies = false;
    for (const SourceSpec& s : sc.sources) {
        if (s.kind == SourceSpec::Kind::game) continue;
        needs_policies = true;
        if (s.kind == SourceSpec::Kind::inline_jobs && s.jobs.empty())
            fail(filename, s.line, "job", "instance '" + s.id + "' has no jobs");
        if (s.kind == SourceSpec::Kind::uniform_random) {
            if (s.random.n_jobs < 0)
                fail(filename, s.line, "kind", "generator '" + s.id + "' has no kind");
            if (s.random.n_jobs < 1)
                fail(filename, s.line, "jobs", "generator '" + s.id + "' needs jobs >= 1");
            if (!s.random.seed && !sc.seed)
                fail(filename, s.line, "seed",
                     "uniform-random generator '" + s.id + "' requires a seed");
        }
    }
    if (needs_policies && sc.policies.empty())
        fail(filename, line_no, "policies", "missing policy list");
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_text(text.str(), path);
}

Instance realize_source(const SourceSpec& source, const PowerParams& params,
                        std::optional<std::uint64_t> seed_override) {
    switch (source.kind) {
        case SourceSpec::Kind::inline_jobs:
            return Instance{params, source.jobs};
        case SourceSpec::Kind::theorem5:
            return adversarial_sequential_instance(params);
        case SourceSpec::Kind::uniform_random:
            break;
        case SourceSpec::Kind::game:
            throw std::invalid_argument("game sources do not build instances");
    }

    const RandomSpec& spec = source.random;
    const std::uint64_t seed =
        seed_override ? *seed_override : spec.seed.value_or(0);
    Rng rng(seed);
    Instance instance{params, {}};
    instance.jobs.reserve(spec.n_jobs);
    for (int i = 0; i < spec.n_jobs; ++i) {
        Job job;
        job.id = i;
        job.release_time = (spec.release_spread > 0.0 && i > 0)
                               ? rng.uniform(0.0, spec.release_spread)
                               : 0.0;
        const int phases = rng.uniform_int(spec.phases_lo, spec.phases_hi);
        for (int k = 0; k < phases; ++k) {
            Phase p;
            p.work = rng.uniform(spec.work_lo, spec.work_hi);
            p.parallelism =
                spec.parseq
                    ? (rng.coin() ? kInfiniteParallelism : 1.0)
                    : static_cast<double>(rng.uniform_int(spec.parallelism_lo,
                                                          spec.parallelism_hi));
            job.phases.push_back(p);
        }
        instance.jobs.push_back(std::move(job));
    }
    return instance;
}

RunResult run_scenario(const Scenario& scenario,
                       std::optional<std::uint64_t> seed_override) {
    RunResult result;
    result.csv = std::string(kRunHeader) + '\n';
    for (const CsvRow& row : scenario_rows(scenario, seed_override)) {
        result.all_bounds_ok = result.all_bounds_ok && row.bound_ok;
        write_row(result.csv, row, "", std::nullopt);
    }
    return result;
}

RunResult sweep_scenario(const Scenario& scenario, const std::string& param,
                         const std::vector<double>& values,
                         std::optional<std::uint64_t> seed_override) {
    if (param != "alpha" && param != "P" && param != "n_jobs")
        throw ScenarioError("sweep parameter must be alpha, P, or n_jobs; got '" +
                            param + "'");
    if (values.empty()) throw ScenarioError("sweep needs a non-empty value list");
    if (param == "n_jobs" &&
        std::none_of(scenario.sources.begin(), scenario.sources.end(),
                     [](const SourceSpec& s) {
                         return s.kind == SourceSpec::Kind::uniform_random;
                     }))
        throw ScenarioError("sweep over n_jobs requires a uniform-random generator");

    RunResult result;
    result.csv = std::string(kRunHeader) + ",sweep_param,sweep_value,ratio_norm\n";
    for (const double value : values) {
        Scenario point = scenario;
        if (param == "alpha") {
            if (!(value > 1.0)) throw ScenarioError("sweep value: alpha must exceed 1");
            point.alpha = value;
        } else if (param == "P") {
            if (!(value >= 1.0) || value != std::floor(value))
                throw ScenarioError("sweep value: P must be a positive integer");
            point.P = static_cast<int>(value);
        } else {
            if (!(value >= 1.0) || value != std::floor(value))
                throw ScenarioError("sweep value: n_jobs must be a positive integer");
            for (SourceSpec& s : point.sources)
                if (s.kind == SourceSpec::Kind::uniform_random)
                    s.random.n_jobs = static_cast<int>(value);
        }

        std::vector<CsvRow> rows = scenario_rows(point, seed_override);
        // Row order within a sweep point is source-major, then policy, then
        // objective, matching scenario_rows; recover the objective index to
        // pick the normalization exponent.
        std::size_t idx = 0;
        for (CsvRow& row : rows) {
            const std::size_t objective_index =
                row.policy == "game" ? 0 : idx % point.objectives.size();
            if (row.policy != "game") ++idx;
            attach_ratio_norm(row, point.objectives, objective_index);
            result.all_bounds_ok = result.all_bounds_ok && row.bound_ok;
            write_row(result.csv, row, param, value);
        }
    }
    return result;
}

std::string bounds_csv(const Scenario& scenario,
                       std::optional<std::uint64_t> seed_override) {
    const PowerParams params(scenario.alpha, scenario.P);
    std::string out = "instance_id,alpha,P,n_jobs,g1_lower_bound,h_lower_bound\n";
    for (const SourceSpec& source : scenario.sources) {
        if (source.kind == SourceSpec::Kind::game) continue;
        const Instance instance = realize_source(
            source, params, effective_seed(scenario, source, seed_override));
        std::optional<double> h_bound;
        if (batched(instance) && parseq(instance))
            h_bound = h_lower_bound(instance);
        out += source.id + ',' + fmt(scenario.alpha) + ',' +
               std::to_string(scenario.P) + ',' +
               std::to_string(instance.jobs.size()) + ',' +
               fmt(g1_lower_bound(instance)) + ',' + cell(h_bound) + '\n';
    }
    return out;
}

RunResult game_csv(const PowerParams& params, double budget) {
    RunResult result;
    result.csv = std::string(kRunHeader) + '\n';
    const CsvRow row = make_game_row(params, budget, "game");
    result.all_bounds_ok = row.bound_ok;
    write_row(result.csv, row, "", std::nullopt);
    return result;
}

}  // namespace espsim
