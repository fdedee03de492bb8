// antgen: generate, preview, validate and summarise event-camera datasets.

#include <antgen/pipeline.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitNoManifest = 3;

int thread_budget()
{
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("ANTGEN_THREADS");
    if (!env || !*env)
        return static_cast<int>(hw);
    int value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc{} || ptr != end || value < 1)
        return 1;
    return value;
}

struct Overrides
{
    std::optional<std::uint64_t> seed;
    std::optional<int> frames;
    std::optional<int> agents;
};

antgen::SceneConfig load_config(const std::string& path, const Overrides& o)
{
    antgen::SceneConfig config = antgen::read_config_file(path);
    if (o.seed)
        config.seed = *o.seed;
    if (o.frames)
        config.frame_count = *o.frames;
    if (o.agents)
        config.agent_count = *o.agents;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw antgen::ConfigError("<flags>", e.what());
    }
    return config;
}

// Maps exceptions to the documented exit codes.
template <typename Fn>
int run_guarded(Fn&& fn)
{
    try {
        return fn();
    } catch (const antgen::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const antgen::ObjParseError& e) {
        std::cerr << "asset error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

bool parse_range(const std::string& text, std::int64_t& first, std::int64_t& last)
{
    const auto dots = text.find("..");
    const auto parse = [](std::string_view s, std::int64_t& out) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size();
    };
    if (dots == std::string::npos)
        return parse(text, first) && (last = first, true);
    return parse(std::string_view(text).substr(0, dots), first) &&
           parse(std::string_view(text).substr(dots + 2), last);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Synthetic event-camera anomaly dataset generator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string dataset_dir;
    std::string frames_arg = "0";
    bool quiet = false;
    Overrides overrides;

    const auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Scene configuration (JSON)")->required();
        cmd->add_option("--seed", overrides.seed, "Override the config seed");
        cmd->add_option("--frames", overrides.frames, "Override the frame count");
        cmd->add_option("--agents", overrides.agents, "Override the agent count");
        cmd->add_flag("--quiet", quiet, "Suppress progress output");
    };

    auto* generate = app.add_subcommand("generate", "Write a complete dataset directory");
    add_overrides(generate);
    generate->add_option("--out", out_dir, "Output directory")->required();

    auto* preview = app.add_subcommand("preview", "Render preview images without writing a dataset");
    add_overrides(preview);
    preview->add_option("--out", out_dir, "Directory for the PPM images")->required();
    preview->add_option("--range", frames_arg, "Frame index N or inclusive range A..B")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Check an existing dataset");
    validate->add_option("dataset", dataset_dir, "Dataset directory")->required();
    validate->add_flag("--quiet", quiet, "Only print failures");

    auto* stats = app.add_subcommand("stats", "Summarise an existing dataset");
    stats->add_option("dataset", dataset_dir, "Dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    const int threads = thread_budget();

    if (*generate) {
        return run_guarded([&] {
            const auto config = load_config(config_path, overrides);
            antgen::ProgressFn progress;
            if (!quiet) {
                progress = [](int done, int total) {
                    std::fprintf(stderr, "\rframe %d/%d", done, total);
                    if (done == total)
                        std::fputc('\n', stderr);
                };
            }
            const auto manifest = antgen::generate_dataset(config, out_dir, threads, progress);
            if (!quiet)
                std::cout << "wrote " << manifest.frame_count << " frames, " << manifest.event_count
                          << " events to " << out_dir << "\n";
            return kExitOk;
        });
    }

    if (*preview) {
        return run_guarded([&] {
            std::int64_t first = 0;
            std::int64_t last = 0;
            if (!parse_range(frames_arg, first, last))
                throw antgen::ConfigError("--range", "expected N or A..B, got '" + frames_arg + "'");
            const auto config = load_config(config_path, overrides);
            if (first < 0 || last < first || last >= config.frame_count)
                throw antgen::ConfigError("--range", "must satisfy 0 <= A <= B < frames");
            const auto images = antgen::preview_frames(config, first, last, threads);
            const auto written = antgen::write_previews(images, out_dir);
            if (!quiet)
                for (const auto& p : written)
                    std::cout << p.string() << "\n";
            return kExitOk;
        });
    }

    if (*validate) {
        return run_guarded([&] {
            const auto report = antgen::validate_dataset(dataset_dir, threads);
            if (!report.manifest_found) {
                std::cerr << dataset_dir << ": no manifest.json (incomplete or not a dataset)\n";
                return kExitNoManifest;
            }
            for (const auto& f : report.failures)
                std::cout << "FAIL " << f << "\n";
            if (report.ok()) {
                if (!quiet)
                    std::cout << "OK " << dataset_dir << "\n";
                return kExitOk;
            }
            return kExitFailure;
        });
    }

    return run_guarded([&] {
        if (!std::filesystem::exists(std::filesystem::path(dataset_dir) / "manifest.json")) {
            std::cerr << dataset_dir << ": no manifest.json (incomplete or not a dataset)\n";
            return kExitNoManifest;
        }
        const auto s = antgen::compute_stats(dataset_dir);
        std::cout << antgen::stats_text(s) << "json: " << antgen::stats_json(s).dump() << "\n";
        return kExitOk;
    });
}
