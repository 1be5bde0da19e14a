// netmh: network features and trait analyses from weekly interaction logs.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include "netmh/error.hpp"
#include "netmh/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct ConfigArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::string output_dir;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("-c,--config", args.config, "key = value configuration file");
    cmd->add_option("-s,--set", args.overrides, "override one setting, key=value (repeatable)");
    cmd->add_option("-o,--out", args.output_dir, "output directory (same as --set output_dir=...)");
}

netmh::PipelineConfig resolve_config(const ConfigArgs& args) {
    netmh::PipelineConfig c = args.config.empty() ? netmh::PipelineConfig{} : netmh::load_config(args.config);
    for (const auto& kv : args.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!args.output_dir.empty()) c.output_dir = args.output_dir;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netmh: static and dynamic network features, trait-group tests, clustering and prediction"};
    app.require_subcommand(1);

    netmh::SyntheticParams synth;
    std::string synth_dir = "synthetic";
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic events/labels bundle with a planted positive class");
    synth_cmd->add_option("-o,--out", synth_dir, "output directory")->capture_default_str();
    synth_cmd->add_option("--nodes", synth.n_nodes, "number of participants")->capture_default_str();
    synth_cmd->add_option("--weeks", synth.n_weeks, "number of weeks")->capture_default_str();
    synth_cmd->add_option("--base-prob", synth.base_edge_prob, "weekly pair interaction probability")->capture_default_str();
    synth_cmd->add_option("--positive-fraction", synth.positive_fraction, "share of labeled nodes that are positive")->capture_default_str();
    synth_cmd->add_option("--labeled-fraction", synth.labeled_fraction, "share of nodes carrying labels")->capture_default_str();
    synth_cmd->add_option("--centrality-multiplier", synth.centrality_multiplier, "activity factor of positive nodes")->capture_default_str();
    synth_cmd->add_option("--volatility-multiplier", synth.volatility_multiplier, "weekly log-variance factor of positive nodes")->capture_default_str();
    synth_cmd->add_option("--modulation-sd", synth.modulation_sd, "sd of the weekly log-activity")->capture_default_str();
    synth_cmd->add_option("--extra-events", synth.extra_events_mean, "mean extra messages per interacting pair")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "random seed")->capture_default_str();

    ConfigArgs cfg;
    std::map<std::string, netmh::PipelineTasks> task_cmds{
        {"ingest", {true, false, false, false}}, {"task1", {false, true, false, false}},
        {"task2", {false, false, true, false}},  {"task3", {false, false, false, true}},
        {"all", netmh::PipelineTasks::all()},
    };
    std::map<std::string, std::string> help{
        {"ingest", "load events and labels and summarize the network"},
        {"task1", "compare centrality magnitude and fluctuation between trait groups"},
        {"task2", "cluster centrality profiles and test clusters for trait enrichment"},
        {"task3", "cross-validated trait prediction from each feature family"},
        {"all", "ingest and run all three tasks"},
    };
    std::map<std::string, CLI::App*> cmds;
    for (const auto& [name, tasks] : task_cmds) {
        cmds[name] = app.add_subcommand(name, help[name]);
        add_config_options(cmds[name], cfg);
    }

    std::string kind, features_out;
    auto* features_cmd = app.add_subcommand("features", "export one feature family as CSV");
    add_config_options(features_cmd, cfg);
    features_cmd->add_option("-k,--kind", kind, "dyn_centrality, dyn_gdv, got, stat_centrality, stat_gdv or raw_sms")->required();
    features_cmd->add_option("-f,--file", features_out, "output CSV (default <output_dir>/features_<kind>.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (synth_cmd->parsed()) {
            for (const auto& p : netmh::write_synthetic_bundle(synth, synth_dir)) std::cout << p.string() << "\n";
            return 0;
        }
        const auto config = resolve_config(cfg);
        if (features_cmd->parsed()) {
            auto tag = netmh::parse_feature_tag(kind);
            if (!tag) throw std::invalid_argument("unknown feature kind '" + kind + "'");
            std::filesystem::path out =
                features_out.empty() ? config.output_dir / ("features_" + kind + ".csv") : std::filesystem::path(features_out);
            netmh::export_features(config, *tag, out);
            std::cout << out.string() << "\n";
            return 0;
        }
        for (const auto& [name, cmd] : cmds) {
            if (!cmd->parsed()) continue;
            for (const auto& p : netmh::run_pipeline(config, task_cmds[name])) std::cout << p.string() << "\n";
        }
        return 0;
    } catch (const netmh::StageError& e) {
        std::cerr << "netmh: stage '" << e.stage() << "' failed: " << e.message() << "\n";
        return e.data_error() ? kDataError : kUsageError;
    } catch (const netmh::ParseError& e) {
        std::cerr << "netmh: " << e.what() << "\n";
        return kUsageError;
    } catch (const netmh::DataError& e) {
        std::cerr << "netmh: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "netmh: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "netmh: " << e.what() << "\n";
        return kDataError;
    }
}
