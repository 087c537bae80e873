#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "interq/error.hpp"
#include "interq/metrics.hpp"
#include "interq/partitioner.hpp"
#include "interq/workload_io.hpp"

namespace interq::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
}

fs::path prepare_out(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

SimConfig sim_config(const std::string& policy, const std::string& arrivals, const std::vector<double>& weights) {
    SimConfig c;
    c.scheduler.policy = policy_from_string(policy);
    c.scheduler.weights = parse_weights(weights);
    c.arrivals = arrival_mode_from_string(arrivals);
    return c;
}

std::string fmt4(double v) { return fmt::format("{:.4f}", v); }

} // namespace

Platform resolve_platform(const std::string& spec) {
    for (const auto& name : preset_names())
        if (spec == name) return platform_preset(spec);
    if (!fs::exists(spec)) throw Error(ErrorCode::UnknownPreset, "'" + spec + "' is neither a preset nor a file");
    return load_platform(spec);
}

std::vector<JobSpec> resolve_workload(const std::string& spec) {
    if (spec.rfind("random:", 0) == 0) {
        const auto parts = split(spec.substr(7), ':');
        if (parts.size() < 3 || parts.size() > 4)
            throw Error(ErrorCode::ParseError, "random workload spec is random:N:WMIN:WMAX[:SEED]");
        RandomWorkloadSpec r;
        try {
            r.jobs = std::stoi(parts[0]);
            r.min_width = std::stoi(parts[1]);
            r.max_width = std::stoi(parts[2]);
            r.seed = parts.size() == 4 ? std::stoull(parts[3]) : 0;
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "random workload spec '" + spec + "' has a non-numeric field");
        }
        r.min_depth = 10;
        r.max_depth = 200;
        return generate_random_workload(r);
    }
    return load_workload(spec);
}

CostWeights parse_weights(const std::vector<double>& values) {
    if (values.size() != 4) throw Error(ErrorCode::ParseError, "--weights takes alpha,beta,gamma,eta");
    CostWeights w{values[0], values[1], values[2], values[3]};
    try {
        validate_weights(w);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("--weights: ") + e.what());
    }
    return w;
}

std::string summary_table(const MetricsReport& m) {
    std::string out;
    auto row = [&](const char* name, const std::string& value) { out += fmt::format("{:<18} {:>14}\n", name, value); };
    row("avg_queue_length", fmt4(m.avg_queue_length));
    row("avg_queue_time", fmt4(m.avg_queue_time));
    row("avg_run_time", fmt4(m.avg_run_time));
    row("avg_total_time", fmt4(m.avg_total_time));
    row("workload_changes", std::to_string(m.workload_changes));
    row("trf", m.trf ? fmt4(*m.trf) : "-");
    row("tirf", m.tirf ? fmt4(*m.tirf) : "-");
    row("avg_tiif", fmt4(m.avg_tiif));
    row("avg_lpst", fmt4(m.avg_lpst));
    row("makespan", fmt4(m.makespan));
    row("jobs_completed", std::to_string(m.jobs_completed));
    row("jobs_omitted", std::to_string(m.jobs_omitted));
    return out;
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const auto platform = resolve_platform(opt.platform);
        const auto workload = resolve_workload(opt.workload);
        const auto config = sim_config(opt.policy, opt.arrivals, opt.weights);
        const auto result = run_simulation(workload, platform, config, opt.seed);

        const auto dir = prepare_out(opt.out);
        write_text(dir / "schedule.json", schedule_to_json(result.exec.executed));
        write_text(dir / "trace.log", format_trace(result.exec.trace));
        write_text(dir / "metrics.json", metrics_to_json(result.metrics));
        write_text(dir / "gantt.csv", gantt_csv(result.exec.executed));

        out << summary_table(result.metrics);
        if (!result.exec.executed.omitted.empty()) {
            std::string ids;
            for (const auto& id : result.exec.executed.omitted) ids += (ids.empty() ? "" : ", ") + id;
            out << "omitted: " << ids << "\n";
            if (opt.strict && config.scheduler.policy == Policy::INTERQ) {
                err << "error: UnschedulableJob: " << ids << "\n";
                return kUnschedulable;
            }
        }
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (opt.runs.size() < 2) throw Error(ErrorCode::ParseError, "compare needs at least two runs");
        if (std::find(opt.runs.begin(), opt.runs.end(), opt.baseline) == opt.runs.end())
            throw Error(ErrorCode::ParseError, "baseline '" + opt.baseline + "' is not one of the runs");
        const auto workload = resolve_workload(opt.workload);

        std::map<std::string, MetricsReport> reports;
        for (const auto& run : opt.runs) {
            const auto colon = run.find(':');
            const std::string platform = run.substr(0, colon);
            const std::string policy = colon == std::string::npos ? "interq" : run.substr(colon + 1);
            const auto config = sim_config(policy, opt.arrivals, opt.weights);
            reports[run] = run_simulation(workload, resolve_platform(platform), config, opt.seed).metrics;
        }

        const auto& base = reports.at(opt.baseline);
        std::map<std::string, ComparativeFactors> factors;
        for (auto& [run, m] : reports) {
            factors[run] = comparative_factors(m, base);
            m.trf = factors[run].trf;
            m.tirf = factors[run].tirf;
        }

        using Getter = std::string (*)(const MetricsReport&, const ComparativeFactors&);
        const std::vector<std::pair<std::string, Getter>> rows{
            {"avg_queue_length", [](const MetricsReport& m, const ComparativeFactors&) { return fmt4(m.avg_queue_length); }},
            {"avg_queue_time", [](const MetricsReport& m, const ComparativeFactors&) { return fmt4(m.avg_queue_time); }},
            {"avg_run_time", [](const MetricsReport& m, const ComparativeFactors&) { return fmt4(m.avg_run_time); }},
            {"avg_total_time", [](const MetricsReport& m, const ComparativeFactors&) { return fmt4(m.avg_total_time); }},
            {"workload_changes",
             [](const MetricsReport& m, const ComparativeFactors&) { return std::to_string(m.workload_changes); }},
            {"makespan", [](const MetricsReport& m, const ComparativeFactors&) { return fmt4(m.makespan); }},
            {"jobs_completed",
             [](const MetricsReport& m, const ComparativeFactors&) { return std::to_string(m.jobs_completed); }},
            {"jobs_omitted", [](const MetricsReport& m, const ComparativeFactors&) { return std::to_string(m.jobs_omitted); }},
            {"avg_lpst", [](const MetricsReport& m, const ComparativeFactors&) { return fmt4(m.avg_lpst); }},
            {"avg_tiif", [](const MetricsReport& m, const ComparativeFactors&) { return fmt4(m.avg_tiif); }},
            {"trf", [](const MetricsReport&, const ComparativeFactors& f) { return fmt4(f.trf); }},
            {"tirf", [](const MetricsReport&, const ComparativeFactors& f) { return fmt4(f.tirf); }},
            {"tiif", [](const MetricsReport&, const ComparativeFactors& f) { return fmt4(f.tiif); }},
        };

        std::string csv = "metric";
        std::string table = fmt::format("{:<18}", "metric");
        for (const auto& run : opt.runs) {
            csv += "," + run;
            table += fmt::format(" {:>22}", run);
        }
        csv += "\n";
        table += "\n";
        for (const auto& [name, get] : rows) {
            csv += name;
            table += fmt::format("{:<18}", name);
            for (const auto& run : opt.runs) {
                const auto v = get(reports.at(run), factors.at(run));
                csv += "," + v;
                table += fmt::format(" {:>22}", v);
            }
            csv += "\n";
            table += "\n";
        }

        nlohmann::ordered_json doc;
        doc["baseline"] = opt.baseline;
        for (const auto& run : opt.runs) {
            auto m = nlohmann::ordered_json::parse(metrics_to_json(reports.at(run)));
            m["tiif"] = factors.at(run).tiif;
            doc["runs"][run] = std::move(m);
        }

        const auto dir = prepare_out(opt.out);
        write_text(dir / "comparison.csv", csv);
        write_text(dir / "comparison.json", doc.dump(2) + "\n");
        out << table;
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

int cmd_characterize(const CharacterizeOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const auto platform = resolve_platform(opt.platform);
        if (!platform.supports(CommMode::QCOMM))
            throw Error(ErrorCode::NoQuantumLink, "characterize needs a platform with quantum links");
        const auto workload = resolve_workload(opt.workload);

        std::string csv = "job,qubits,partitions,remote_ops,extra_qubits,modules\n";
        for (const auto& job : workload) {
            const auto plan = find_partition(job, CommMode::QCOMM, platform);
            int parts = 0, extra = 0;
            std::int64_t remote = 0;
            std::string modules;
            if (plan) {
                parts = static_cast<int>(plan->parts.size());
                remote = plan->crossing_weight();
                for (int a : plan->meta.ancillas) extra += a;
                for (const auto& m : plan->meta.part_modules) modules += (modules.empty() ? "" : ";") + m;
            }
            csv += fmt::format("{},{},{},{},{},{}\n", job.id, job.qubits, parts, remote, extra, modules);
        }
        const auto dir = prepare_out(opt.out);
        write_text(dir / "characterize.csv", csv);
        out << csv;
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

} // namespace interq::cli
