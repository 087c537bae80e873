#include "interq/workload_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "interq/error.hpp"
#include "interq/fragment_id.hpp"
#include "interq/platform.hpp"

namespace interq {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

json parse_text(std::string_view text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(what, e.what());
    }
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where + "." + key, "missing");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        fail(where + "." + key, "wrong type");
    }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    return field<T>(j, key, where);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

JobSpec job_from_json(const json& j, const std::string& where) {
    JobSpec job;
    job.id = field<std::string>(j, "id", where);
    if (!is_valid_job_id(job.id)) fail(where + ".id", "'" + job.id + "' must use only letters, digits and '.'");
    job.qubits = field<int>(j, "qubits", where);
    job.depth = field<int>(j, "depth", where);
    job.shots = field<std::int64_t>(j, "shots", where);
    job.arrival_ns = field_or<Nanos>(j, "arrival_ns", 0, where);

    const auto& edges = j.contains("edges") ? j.at("edges") : json::array();
    if (!edges.is_array()) fail(where + ".edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string at = where + ".edges[" + std::to_string(i) + "]";
        const auto& e = edges[i];
        if (!e.is_array() || e.size() < 2 || e.size() > 3) fail(at, "expected [a, b] or [a, b, weight]");
        InteractionEdge edge;
        try {
            edge.a = e[0].get<int>();
            edge.b = e[1].get<int>();
            edge.weight = e.size() == 3 ? e[2].get<int>() : 1;
        } catch (const json::exception&) {
            fail(at, "entries must be integers");
        }
        if (edge.a < 0 || edge.b < 0 || edge.a >= job.qubits || edge.b >= job.qubits)
            fail(at, "qubit index outside [0, " + std::to_string(job.qubits) + ")");
        if (edge.a == edge.b) fail(at, "self-interaction");
        if (edge.weight < 1) fail(at, "weight must be >= 1");
        job.edges.push_back(edge);
    }

    if (j.contains("modes")) {
        const auto& modes = j.at("modes");
        if (!modes.is_array()) fail(where + ".modes", "expected an array");
        job.modes.clear();
        for (const auto& m : modes) {
            if (!m.is_string()) fail(where + ".modes", "expected strings");
            job.modes.push_back(comm_mode_from_string(m.get<std::string>()));
        }
    }
    try {
        validate_job(job);
    } catch (const Error& e) {
        fail(where, e.what());
    }
    return job;
}

json job_to_json(const JobSpec& job) {
    json j;
    j["id"] = job.id;
    j["qubits"] = job.qubits;
    j["depth"] = job.depth;
    j["shots"] = job.shots;
    json edges = json::array();
    for (const auto& e : job.edges) edges.push_back(json::array({e.a, e.b, e.weight}));
    j["edges"] = std::move(edges);
    json modes = json::array();
    for (auto m : job.modes) modes.push_back(std::string(to_string(m)));
    j["modes"] = std::move(modes);
    j["arrival_ns"] = job.arrival_ns;
    return j;
}

json module_to_json(const ModuleProfile& m) {
    return json{{"id", m.id},
                {"capacity", m.capacity},
                {"layer_time", m.layer_time},
                {"shot_overhead", m.shot_overhead},
                {"gate_fidelity_1q", m.gate_fidelity_1q},
                {"gate_fidelity_2q", m.gate_fidelity_2q},
                {"meas_fidelity", m.meas_fidelity}};
}

ModuleProfile module_from_json(const json& j, const std::string& where) {
    ModuleProfile m;
    m.id = field<std::string>(j, "id", where);
    m.capacity = field<int>(j, "capacity", where);
    m.layer_time = field_or<Nanos>(j, "layer_time", 0, where);
    m.shot_overhead = field_or<Nanos>(j, "shot_overhead", 0, where);
    m.gate_fidelity_1q = field_or<double>(j, "gate_fidelity_1q", 1.0, where);
    m.gate_fidelity_2q = field_or<double>(j, "gate_fidelity_2q", 1.0, where);
    m.meas_fidelity = field_or<double>(j, "meas_fidelity", 1.0, where);
    return m;
}

json link_to_json(const LinkProfile& l) {
    json j{{"id", l.id},
           {"a", l.a},
           {"b", l.b},
           {"kind", std::string(to_string(l.kind))},
           {"classical_latency", l.classical_latency},
           {"meas_latency", l.meas_latency},
           {"ctrl_latency", l.ctrl_latency},
           {"pair_time", l.pair_time},
           {"succ_prob", l.succ_prob},
           {"bell_op_time", l.bell_op_time},
           {"corr_time", l.corr_time},
           {"pair_fidelity", l.pair_fidelity},
           {"ttl", l.ttl},
           {"parallelism", l.parallelism}};
    j["budget"] = l.budget ? json(*l.budget) : json(nullptr);
    return j;
}

LinkProfile link_from_json(const json& j, const std::string& where) {
    LinkProfile l;
    l.id = field_or<std::string>(j, "id", "", where);
    l.a = field<std::string>(j, "a", where);
    l.b = field<std::string>(j, "b", where);
    try {
        l.kind = link_kind_from_string(field<std::string>(j, "kind", where));
    } catch (const Error& e) {
        fail(where + ".kind", e.what());
    }
    l.classical_latency = field_or<Nanos>(j, "classical_latency", 0, where);
    l.meas_latency = field_or<Nanos>(j, "meas_latency", 0, where);
    l.ctrl_latency = field_or<Nanos>(j, "ctrl_latency", 0, where);
    l.pair_time = field_or<Nanos>(j, "pair_time", 0, where);
    if (j.contains("pair_rate_hz")) l.pair_time = pair_time_from_rate(field<double>(j, "pair_rate_hz", where));
    l.succ_prob = field_or<double>(j, "succ_prob", 0.0, where);
    l.bell_op_time = field_or<Nanos>(j, "bell_op_time", 0, where);
    l.corr_time = field_or<Nanos>(j, "corr_time", 0, where);
    l.pair_fidelity = field_or<double>(j, "pair_fidelity", 0.0, where);
    l.ttl = field_or<Nanos>(j, "ttl", 0, where);
    l.parallelism = field_or<int>(j, "parallelism", 1, where);
    if (j.contains("budget") && !j.at("budget").is_null()) l.budget = field<std::int64_t>(j, "budget", where);
    return l;
}

json fragment_json(const Fragment& f) {
    json j;
    j["id"] = f.id;
    j["parent"] = f.parent ? json(*f.parent) : json(nullptr);
    j["stage"] = std::string(to_string(f.stage));
    j["qubits"] = f.qubits;
    j["ancilla_qubits"] = f.ancilla_qubits;
    j["depth"] = f.depth;
    j["shots_effective"] = f.shots_effective;
    j["cut_overhead"] = f.cut_overhead;
    j["comm_cost"] = f.comm_cost;
    j["remote_ops"] = f.remote_ops;
    j["bell_demand"] = json::object();
    for (const auto& [link, pairs] : f.bell_demand) j["bell_demand"][link] = pairs;
    json prec = json::array();
    for (const auto& p : f.precedence_in) prec.push_back(json{{"from", p.from}, {"delay_ns", p.delay_ns}});
    j["precedence_in"] = std::move(prec);
    j["partners"] = json::object();
    for (const auto& [id, ops] : f.partners) j["partners"][id] = ops;
    j["pinned_module"] = f.pinned_module ? json(*f.pinned_module) : json(nullptr);
    j["local_gates"] = f.local_gates;
    j["cut_count"] = f.cut_count;
    return j;
}

Fragment fragment_parse(const json& j, const std::string& where) {
    Fragment f;
    f.id = field<std::string>(j, "id", where);
    if (j.contains("parent") && !j.at("parent").is_null()) f.parent = field<std::string>(j, "parent", where);
    try {
        f.stage = stage_from_string(field<std::string>(j, "stage", where));
    } catch (const Error& e) {
        fail(where + ".stage", e.what());
    }
    f.qubits = field<int>(j, "qubits", where);
    f.ancilla_qubits = field_or<int>(j, "ancilla_qubits", 0, where);
    f.depth = field<int>(j, "depth", where);
    f.shots_effective = field<std::int64_t>(j, "shots_effective", where);
    f.cut_overhead = field_or<double>(j, "cut_overhead", 1.0, where);
    f.comm_cost = field_or<double>(j, "comm_cost", 0.0, where);
    f.remote_ops = field_or<int>(j, "remote_ops", 0, where);
    f.bell_demand = field_or<std::map<std::string, std::int64_t>>(j, "bell_demand", {}, where);
    if (j.contains("precedence_in"))
        for (const auto& p : j.at("precedence_in"))
            f.precedence_in.push_back({field<std::string>(p, "from", where + ".precedence_in"),
                                       field<Nanos>(p, "delay_ns", where + ".precedence_in")});
    f.partners = field_or<std::map<std::string, int>>(j, "partners", {}, where);
    if (j.contains("pinned_module") && !j.at("pinned_module").is_null())
        f.pinned_module = field<std::string>(j, "pinned_module", where);
    f.local_gates = field_or<std::int64_t>(j, "local_gates", 0, where);
    f.cut_count = field_or<int>(j, "cut_count", 0, where);
    return f;
}

} // namespace

std::vector<JobSpec> parse_workload(std::string_view text) {
    const json doc = parse_text(text, "workload");
    if (!doc.is_object() || !doc.contains("jobs")) fail("workload", "expected an object with a \"jobs\" array");
    const auto& jobs = doc.at("jobs");
    if (!jobs.is_array()) fail("workload.jobs", "expected an array");

    std::vector<JobSpec> out;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto job = job_from_json(jobs[i], "jobs[" + std::to_string(i) + "]");
        if (!ids.insert(job.id).second) throw Error(ErrorCode::DuplicateJobId, "job id '" + job.id + "' repeats");
        if (!out.empty() && job.arrival_ns < out.back().arrival_ns)
            fail("jobs[" + std::to_string(i) + "].arrival_ns", "arrivals must be nondecreasing");
        out.push_back(std::move(job));
    }
    return out;
}

std::vector<JobSpec> load_workload(const std::string& path) { return parse_workload(read_file(path)); }

std::string workload_to_json(const std::vector<JobSpec>& jobs) {
    json arr = json::array();
    for (const auto& job : jobs) arr.push_back(job_to_json(job));
    return json{{"jobs", std::move(arr)}}.dump(2) + "\n";
}

void save_workload(const std::string& path, const std::vector<JobSpec>& jobs) {
    write_file(path, workload_to_json(jobs));
}

Platform parse_platform(std::string_view text) {
    const json doc = parse_text(text, "platform");
    if (!doc.is_object()) fail("platform", "expected an object");

    Platform p;
    if (doc.contains("preset")) p = platform_preset(field<std::string>(doc, "preset", "platform"));
    if (doc.contains("comm_mode")) {
        try {
            p.comm_mode = comm_mode_from_string(field<std::string>(doc, "comm_mode", "platform"));
        } catch (const Error& e) {
            fail("platform.comm_mode", e.what());
        }
    }
    p.cut_budget = field_or<double>(doc, "cut_budget", p.cut_budget, "platform");
    p.comm_budget = field_or<double>(doc, "comm_budget", p.comm_budget, "platform");
    p.sampling_factor = field_or<double>(doc, "sampling_factor", p.sampling_factor, "platform");
    if (doc.contains("modules")) {
        p.modules.clear();
        const auto& mods = doc.at("modules");
        if (!mods.is_array()) fail("platform.modules", "expected an array");
        for (std::size_t i = 0; i < mods.size(); ++i)
            p.modules.push_back(module_from_json(mods[i], "modules[" + std::to_string(i) + "]"));
    }
    if (doc.contains("links")) {
        p.links.clear();
        const auto& links = doc.at("links");
        if (!links.is_array()) fail("platform.links", "expected an array");
        for (std::size_t i = 0; i < links.size(); ++i)
            p.links.push_back(link_from_json(links[i], "links[" + std::to_string(i) + "]"));
    }
    p.incidence.clear();
    return validate_platform(std::move(p));
}

Platform load_platform(const std::string& path) { return parse_platform(read_file(path)); }

std::string platform_to_json(const Platform& p) {
    json j;
    j["comm_mode"] = std::string(to_string(p.comm_mode));
    j["cut_budget"] = p.cut_budget;
    j["comm_budget"] = p.comm_budget;
    j["sampling_factor"] = p.sampling_factor;
    json mods = json::array();
    for (const auto& m : p.modules) mods.push_back(module_to_json(m));
    j["modules"] = std::move(mods);
    json links = json::array();
    for (const auto& l : p.links) links.push_back(link_to_json(l));
    j["links"] = std::move(links);
    return j.dump(2) + "\n";
}

std::string fragment_to_json(const Fragment& f) { return fragment_json(f).dump(2) + "\n"; }

Fragment fragment_from_json(std::string_view text) { return fragment_parse(parse_text(text, "fragment"), "fragment"); }

std::string schedule_to_json(const Schedule& s) {
    json j;
    json entries = json::array();
    for (const auto& e : s.entries) {
        entries.push_back(json{{"module", e.group.module},
                               {"fragments", e.group.fragments},
                               {"score", e.group.score},
                               {"start_ns", e.start_ns},
                               {"fragment_end_ns", e.fragment_end_ns},
                               {"sync_delay_ns", e.sync_delay_ns}});
    }
    j["entries"] = std::move(entries);
    json res = json::array();
    for (const auto& r : s.link_reservations)
        res.push_back(json{{"link", r.link}, {"begin_ns", r.begin_ns}, {"end_ns", r.end_ns}, {"pairs", r.pairs}});
    j["link_reservations"] = std::move(res);
    json prec = json::array();
    for (const auto& e : s.precedence_edges)
        prec.push_back(json{{"from", e.from}, {"to", e.to}, {"delay_ns", e.delay_ns}});
    j["precedence_edges"] = std::move(prec);
    json frags = json::array();
    for (const auto& f : s.fragments) frags.push_back(fragment_json(f));
    j["fragments"] = std::move(frags);
    j["omitted"] = s.omitted;
    return j.dump(2) + "\n";
}

Schedule schedule_from_json(std::string_view text) {
    const json doc = parse_text(text, "schedule");
    Schedule s;
    const std::string w = "schedule";
    for (const auto& e : field<json>(doc, "entries", w)) {
        ScheduleEntry entry;
        entry.group.module = field<std::string>(e, "module", w + ".entries");
        entry.group.fragments = field<std::vector<std::string>>(e, "fragments", w + ".entries");
        entry.group.score = field_or<double>(e, "score", 0.0, w + ".entries");
        entry.start_ns = field<Nanos>(e, "start_ns", w + ".entries");
        entry.fragment_end_ns = field<std::vector<Nanos>>(e, "fragment_end_ns", w + ".entries");
        entry.sync_delay_ns = field_or<std::vector<Nanos>>(e, "sync_delay_ns", {}, w + ".entries");
        s.entries.push_back(std::move(entry));
    }
    for (const auto& r : field_or<json>(doc, "link_reservations", json::array(), w))
        s.link_reservations.push_back({field<std::string>(r, "link", w + ".link_reservations"),
                                       field<Nanos>(r, "begin_ns", w + ".link_reservations"),
                                       field<Nanos>(r, "end_ns", w + ".link_reservations"),
                                       field_or<int>(r, "pairs", 1, w + ".link_reservations")});
    for (const auto& e : field_or<json>(doc, "precedence_edges", json::array(), w))
        s.precedence_edges.push_back({field<std::string>(e, "from", w + ".precedence_edges"),
                                      field<std::string>(e, "to", w + ".precedence_edges"),
                                      field<Nanos>(e, "delay_ns", w + ".precedence_edges")});
    for (const auto& f : field_or<json>(doc, "fragments", json::array(), w))
        s.fragments.push_back(fragment_parse(f, w + ".fragments"));
    s.omitted = field_or<std::vector<std::string>>(doc, "omitted", {}, w);
    return s;
}

std::string gantt_csv(const Schedule& s) {
    std::map<std::string, Stage> stage;
    for (const auto& f : s.fragments) stage[f.id] = f.stage;
    std::string out = "fragment,module,start_ns,end_ns,stage\n";
    for (const auto& e : s.entries) {
        for (std::size_t i = 0; i < e.group.fragments.size(); ++i) {
            const auto& id = e.group.fragments[i];
            const Nanos end = i < e.fragment_end_ns.size() ? e.fragment_end_ns[i] : e.start_ns;
            auto st = stage.find(id);
            out += id + "," + e.group.module + "," + std::to_string(e.start_ns) + "," + std::to_string(end) + "," +
                   std::string(to_string(st == stage.end() ? Stage::FLAT : st->second)) + "\n";
        }
    }
    return out;
}

std::vector<JobSpec> generate_random_workload(const RandomWorkloadSpec& spec) {
    if (spec.jobs < 0) throw std::invalid_argument("job count must be >= 0");
    if (spec.min_width < 1 || spec.max_width < spec.min_width) throw std::invalid_argument("bad width range");
    if (spec.min_depth < 1 || spec.max_depth < spec.min_depth) throw std::invalid_argument("bad depth range");
    if (spec.shots < 1 || spec.density < 0.0 || spec.locality < 1) throw std::invalid_argument("bad generator spec");

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> width(spec.min_width, spec.max_width);
    std::uniform_int_distribution<int> depth(spec.min_depth, spec.max_depth);
    std::uniform_int_distribution<int> weight(1, 3);

    std::vector<JobSpec> out;
    for (int i = 0; i < spec.jobs; ++i) {
        JobSpec job;
        job.id = std::to_string(i + 1);
        job.qubits = width(rng);
        job.depth = depth(rng);
        job.shots = spec.shots;

        std::map<std::pair<int, int>, int> w;
        for (int q = 0; q + 1 < job.qubits; ++q) w[{q, q + 1}] += weight(rng);
        if (job.qubits > 1) {
            const auto extra = static_cast<long>(std::llround(job.qubits * spec.density));
            std::uniform_int_distribution<int> first(0, job.qubits - 2);
            for (long k = 0; k < extra; ++k) {
                const int a = first(rng);
                std::uniform_int_distribution<int> gap(1, std::min(spec.locality, job.qubits - 1 - a));
                w[{a, a + gap(rng)}] += weight(rng);
            }
        }
        for (const auto& [pair, weight_sum] : w) job.edges.push_back({pair.first, pair.second, weight_sum});
        out.push_back(std::move(job));
    }
    return out;
}

std::vector<std::string> preset_names() { return {"IBM_LOCC", "IONQ_QCOMM", "ATOMIC_QCOMM"}; }

namespace {

void full_mesh(Platform& p, const LinkProfile& prototype) {
    for (std::size_t i = 0; i < p.modules.size(); ++i)
        for (std::size_t j = i + 1; j < p.modules.size(); ++j) {
            LinkProfile l = prototype;
            l.a = p.modules[i].id;
            l.b = p.modules[j].id;
            l.id = l.a + "--" + l.b;
            p.links.push_back(l);
        }
}

} // namespace

Platform platform_preset(std::string_view name) {
    Platform p;
    if (name == "IBM_LOCC") {
        for (const char* id : {"ibm_brisbane", "ibm_kawasaki", "ibm_kyiv", "ibm_sherbrooke"})
            p.modules.push_back({id, 127, 1'000, 250'000, 0.9997, 0.993, 0.985});
        LinkProfile l;
        l.kind = LinkKind::CLASSICAL;
        l.classical_latency = 500'000;
        l.ctrl_latency = 1'500'000;
        full_mesh(p, l);
        p.comm_mode = CommMode::LOCC;
        p.sampling_factor = 1.0;
    } else if (name == "IONQ_QCOMM") {
        for (const char* id : {"ionq_aria_1", "ionq_aria_2", "ionq_aria_3"})
            p.modules.push_back({id, 25, 100'000, 1'000'000, 0.9998, 0.995, 0.995});
        for (const char* id : {"ionq_forte_1", "ionq_forte_2", "ionq_forte_3"})
            p.modules.push_back({id, 36, 100'000, 1'000'000, 0.9998, 0.995, 0.995});
        LinkProfile l;
        l.kind = LinkKind::QUANTUM;
        l.classical_latency = 2'000'000;
        l.ctrl_latency = 200'000;
        l.corr_time = 200'000;
        l.bell_op_time = 200'000;
        l.pair_time = pair_time_from_rate(5.0e3);
        l.succ_prob = 1.0;
        l.pair_fidelity = 0.99;
        l.ttl = 500'000'000;
        l.parallelism = 1;
        full_mesh(p, l);
        p.comm_mode = CommMode::QCOMM;
        p.sampling_factor = 2.0;
    } else if (name == "ATOMIC_QCOMM") {
        for (const char* id : {"ac1000_1", "ac1000_2", "ac1000_3", "ac1000_4"})
            p.modules.push_back({id, 112, 10'000, 500'000, 0.9995, 0.994, 0.993});
        LinkProfile l;
        l.kind = LinkKind::QUANTUM;
        l.classical_latency = 3'000'000;
        l.ctrl_latency = 300'000;
        l.corr_time = 300'000;
        l.bell_op_time = 100'000;
        l.pair_time = pair_time_from_rate(3.0e3);
        l.succ_prob = 1.0;
        l.pair_fidelity = 0.988;
        l.ttl = 300'000'000;
        l.parallelism = 1;
        full_mesh(p, l);
        p.comm_mode = CommMode::QCOMM;
        p.sampling_factor = 2.0;
    } else {
        throw Error(ErrorCode::UnknownPreset, "unknown platform preset '" + std::string(name) + "'");
    }
    p.cut_budget = 16.0;
    p.comm_budget = 1.0e12;
    return validate_platform(std::move(p));
}

} // namespace interq
