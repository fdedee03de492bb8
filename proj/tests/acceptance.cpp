// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <antgen/pipeline.hpp>

#include "support/oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>
#include <string>

using namespace antgen;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

int run(const std::string& command)
{
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p)
{
    return "'" + p.string() + "'";
}

const std::string kCli = ANTGEN_CLI_PATH;
const fs::path kExampleConfig = fs::path(ANTGEN_SOURCE_DIR) / "configs" / "example.json";

class ScratchDir
{
public:
    explicit ScratchDir(const std::string& tag)
        : path_(fs::temp_directory_path() / ("antgen_acceptance_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir() { fs::remove_all(path_); }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

SceneConfig one_class_config(std::uint64_t seed)
{
    SceneConfig c;
    c.seed = seed;
    c.classes = {AgentClassConfig{}};
    return c;
}

// 1. Fisher combination of a single p-value is the identity.
Outcome fisher_identity()
{
    StatsConfig cfg;
    double worst = 0.0;
    for (double p : {1e-6, 0.01, 0.05, 0.5, 0.99}) {
        BehaviourSample s;
        s.p = p;
        const bool included = true;
        const double r = combine_p_values(std::span(&s, 1), std::span(&included, 1), cfg);
        worst = std::max(worst, std::abs(r - p));
    }
    return {worst <= 1e-12, fmt("max |r - p| = %.3g", worst)};
}

// 2. Under the null, r_bar is Uniform(0, 1).
Outcome null_uniformity()
{
    const SceneConfig cfg = one_class_config(2024);
    const auto w = cfg.class_likelihoods();
    std::vector<double> r;
    r.reserve(10000);
    int included = 0;
    for (std::uint32_t id = 1; id <= 10000; ++id) {
        const Agent a = spawn_agent(cfg, w, id, 0);
        r.push_back(a.score.r_bar);
        for (bool b : a.included)
            included += b;
    }
    const double p = oracle::ks_uniform_p_value(r);
    const bool all_included = included == 10000 * static_cast<int>(kBehaviourCount);
    return {p > 0.01 && all_included, fmt("KS p = %.4f over 10000 agents", p)};
}

// 3. Anomalous fraction tracks v.
Outcome anomaly_rate()
{
    std::string detail;
    bool pass = true;
    for (double v : {0.01, 0.05, 0.1}) {
        SceneConfig cfg = one_class_config(static_cast<std::uint64_t>(v * 1000));
        cfg.stats.v = v;
        const auto w = cfg.class_likelihoods();
        int anomalous = 0;
        const int n = 100000;
        for (int id = 1; id <= n; ++id)
            anomalous += spawn_agent(cfg, w, static_cast<std::uint32_t>(id), 0).score.is_anomaly;
        const double frac = anomalous / static_cast<double>(n);
        pass &= std::abs(frac - v) <= 0.01;
        detail += fmt("v=%.2f: %.4f  ", v, frac);
    }
    return {pass, detail};
}

// 4. gate() equals a scalar reading of the hysteresis rule.
Outcome eventizer_oracle()
{
    oracle::Gen gen(4);
    long mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double beta = gen.uniform(0.001, 0.5);
        Grid<double> d(64, 64);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                d(y, x) = gen.uniform(-1, 1);
        d(0, 0) = beta;
        d(0, 1) = -beta;
        const EventFrame e = gate(d, beta);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) {
                const float ref = d(y, x) > beta ? 1.0f : -d(y, x) > beta ? 0.0f : 0.5f;
                mismatches += e.values(y, x) != ref;
            }
    }
    return {mismatches == 0, fmt("%.0f mismatching pixels over 100 grids", static_cast<double>(mismatches))};
}

// 5. A static, noiseless scene emits no events.
Outcome quiescence()
{
    SceneConfig cfg;
    cfg.seed = 5;
    cfg.agent_count = 6;
    cfg.frame_count = 100;
    cfg.render.background_sigma = 0.0;
    const double xs[] = {-1.5, 0.0, 1.5};
    for (int i = 0; i < 3; ++i) {
        AgentClassConfig cls;
        cls.shape = kAllShapes[static_cast<std::size_t>(i * 4)];
        for (auto& s : cls.behaviours)
            s.sigma = 0.0;
        for (auto b : {Behaviour::translation_x, Behaviour::translation_y, Behaviour::translation_z,
                       Behaviour::rotation_x, Behaviour::rotation_y, Behaviour::rotation_z, Behaviour::surface_noise})
            cls.behaviours[index_of(b)].mu = 0.0;
        cls.behaviours[index_of(Behaviour::init_position_x)].mu = xs[i];
        cls.behaviours[index_of(Behaviour::init_rotation_y)].mu = 30.0;
        cfg.classes.push_back(cls);
    }

    long noisy_frames = 0;
    std::size_t event_records = std::numeric_limits<std::size_t>::max();
    bool drew_something = false;
    produce_dataset(cfg, 4, [&](const std::string& path, std::string_view bytes) {
        if (path.starts_with("events/")) {
            const EventFrame e = event_frame_from_pgm(read_pgm(bytes), 0);
            noisy_frames += !(e.values == kEventNone).all();
        } else if (path == "events.bin") {
            event_records = read_events(bytes).size();
        } else if (path.starts_with("masks/")) {
            drew_something |= (id_grid_from_pgm(read_pgm(bytes)) != 0).any();
        }
    });
    return {noisy_frames == 0 && event_records == 0 && drew_something,
            fmt("%.0f non-quiet event frames, %.0f records, agents visible: %.0f", static_cast<double>(noisy_frames),
                static_cast<double>(event_records), drew_something)};
}

// 6. Rendered ID-mask box of a unit cube matches its projected corners.
Outcome geometric_truth()
{
    SceneConfig cfg = one_class_config(6);
    cfg.classes[0].shape = ShapeId::cuboid;
    cfg.camera.fov_degrees = 60.0;
    cfg.render.background_sigma = 0.0;
    const MeshLibrary meshes(cfg.tessellation, cfg.assets);
    SceneState s;
    Agent a;
    a.id = 1;
    a.position = Eigen::Vector3d(0, 0, 5);
    s.agents = {a};
    const FrameSet f = render_frame(s, meshes, cfg);

    int x0 = cfg.camera.width, y0 = cfg.camera.height, x1 = -1, y1 = -1;
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            if (f.agent_id(y, x) == 1) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    double ax0 = 1e9, ay0 = 1e9, ax1 = -1e9, ay1 = -1e9;
    for (int i = 0; i < 8; ++i) {
        const auto p = oracle::pinhole((i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, 5.0 + ((i & 4) ? 0.5 : -0.5),
                                       cfg.camera.width, cfg.camera.height, cfg.camera.fov_degrees);
        ax0 = std::min(ax0, p.x);
        ay0 = std::min(ay0, p.y);
        ax1 = std::max(ax1, p.x);
        ay1 = std::max(ay1, p.y);
    }
    // Pixel i covers [i, i + 1); the mask's right and bottom edges sit at max + 1.
    const double err = std::max({std::abs(x0 - ax0), std::abs(y0 - ay0), std::abs(x1 + 1 - ax1),
                                 std::abs(y1 + 1 - ay1)});
    return {x1 >= 0 && err <= 1.0, fmt("max edge error %.3f px", err)};
}

// 7. Manifests agree across thread counts.
Outcome determinism()
{
    ScratchDir dir("determinism");
    const std::string common =
        " generate --quiet --config " + quote(kExampleConfig) + " --frames 50 --agents 20 --out ";
    const int a = run("ANTGEN_THREADS=1 " + kCli + common + quote(dir.path() / "a"));
    const int b = run("ANTGEN_THREADS=8 " + kCli + common + quote(dir.path() / "b"));
    if (a != 0 || b != 0)
        return {false, fmt("generate exit codes %.0f and %.0f", a, b)};
    const std::string ma = read_file(dir.path() / "a" / "manifest.json");
    const std::string mb = read_file(dir.path() / "b" / "manifest.json");
    const auto m = parse_manifest(ma);
    const bool shape_ok = m.frame_count == 50 && m.width == 346 && m.height == 260 && m.config.at("agents") == 20;
    return {ma == mb && shape_ok, std::string(ma == mb ? "manifests identical" : "manifests differ") +
                                      fmt(", %.0f files, %.0f events", static_cast<double>(m.files.size()),
                                          static_cast<double>(m.event_count))};
}

// 8. Fuzz endpoints and shape of the transform.
Outcome fuzziness()
{
    oracle::Gen gen(8);
    long bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double n = gen.normal() * 3.0;
        const double v = gen.uniform(0.0, 1.0);
        bad += blend_fuzz(n, v, 1.0) != n;
        StatsConfig cfg;
        cfg.v = v;
        cfg.z = 1.0;
        const BehaviourSpec spec{gen.uniform(-5, 5), gen.uniform(0.1, 3), true};
        const auto s = make_behaviour_sample(spec, cfg, n);
        bad += s.value_visual != s.value_stat;
    }
    for (int i = 0; i < 1000; ++i) {
        StatsConfig cfg;
        cfg.v = gen.uniform(0.01, 1.0);
        cfg.z = 0.0;
        const double n = gen.uniform(-cfg.v, cfg.v) * 0.999;
        const BehaviourSpec spec{gen.uniform(-5, 5), gen.uniform(0.1, 3), true};
        bad += make_behaviour_sample(spec, cfg, n).value_visual != spec.mu;
    }
    for (double v : {0.0, 0.01, 0.05, 0.1, 0.5, 1.0}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (int k = -40000; k <= 40000; ++k) {
            const double n = k * 1e-4;
            const double f = fuzz_transform(n, v);
            bad += fuzz_transform(-n, v) != -f;
            bad += f < prev;
            prev = f;
        }
    }
    return {bad == 0, fmt("%.0f violations", static_cast<double>(bad))};
}

// 9. Class frequencies follow the weights; exported omega recomputes exactly.
Outcome class_census()
{
    SceneConfig cfg = one_class_config(9);
    cfg.classes = {AgentClassConfig{}, AgentClassConfig{}, AgentClassConfig{}};
    cfg.classes[0].weight = 2.0;
    const auto w = cfg.class_likelihoods();
    int counts[3] = {0, 0, 0};
    const int n = 40000;
    for (int id = 1; id <= n; ++id)
        ++counts[spawn_agent(cfg, w, static_cast<std::uint32_t>(id), 0).class_index];
    const double f[3] = {counts[0] / double(n), counts[1] / double(n), counts[2] / double(n)};
    bool pass = std::abs(f[0] - 0.5) <= 0.01 && std::abs(f[1] - 0.25) <= 0.01 && std::abs(f[2] - 0.25) <= 0.01;

    SceneConfig small = read_config_file(kExampleConfig);
    small.frame_count = 20;
    small.agent_count = 30;
    long labels = 0, bad = 0;
    produce_dataset(small, 4, [&](const std::string& path, std::string_view bytes) {
        if (path != "labels.jsonl")
            return;
        std::size_t start = 0;
        while (start < bytes.size()) {
            const std::size_t end = bytes.find('\n', start);
            const auto j = nlohmann::json::parse(bytes.substr(start, end - start));
            for (const auto& a : j.at("agents")) {
                ++labels;
                const double omega = a.at("omega").get<double>();
                bad += omega != a.at("w_bar").get<double>() * a.at("r_bar").get<double>();
                bad += a.at("is_anomaly").get<bool>() != label_anomaly(omega, small.stats.v);
            }
            start = end + 1;
        }
    });
    pass &= labels > 0 && bad == 0;
    return {pass, fmt("frequencies %.4f %.4f %.4f", f[0], f[1], f[2]) +
                      fmt(", %.0f labels, %.0f omega mismatches", static_cast<double>(labels), static_cast<double>(bad))};
}

// 10. validate accepts a fresh dataset and names any corrupted file.
Outcome validation()
{
    ScratchDir dir("validate");
    const fs::path data = dir.path() / "data";
    const fs::path out = dir.path() / "validate.txt";
    if (run(kCli + " generate --quiet --config " + quote(kExampleConfig) + " --frames 4 --agents 8 --out " +
            quote(data)) != 0)
        return {false, "generate failed"};
    if (run(kCli + " validate --quiet " + quote(data) + " >" + quote(out)) != 0)
        return {false, "fresh dataset did not validate"};

    std::vector<std::string> targets;
    for (const auto& e : parse_manifest(read_file(data / "manifest.json")).files)
        targets.push_back(e.path);
    targets.emplace_back("manifest.json");

    oracle::Gen gen(10);
    int caught = 0;
    std::string missed;
    for (const auto& rel : targets) {
        const fs::path file = data / rel;
        const std::string original = read_file(file);
        std::string bytes = original;
        const auto at = static_cast<std::size_t>(gen.integer(0, static_cast<int>(bytes.size()) - 1));
        bytes[at] = static_cast<char>(bytes[at] ^ (1 << gen.integer(0, 7)));
        write_file(file, bytes);
        const int code = run(kCli + " validate --quiet " + quote(data) + " >" + quote(out) + " 2>&1");
        const bool named = read_file(out).find(rel) != std::string::npos;
        if (code == 1 && named)
            ++caught;
        else
            missed += " " + rel;
        write_file(file, original);
    }
    const bool pass = caught == static_cast<int>(targets.size());
    return {pass, fmt("%.0f of %.0f single-byte corruptions reported by name", caught,
                      static_cast<double>(targets.size())) +
                      (missed.empty() ? "" : "; missed:" + missed)};
}

struct Criterion
{
    int number;
    const char* title;
    double budget_seconds; // 0 when no runtime bound applies
    std::function<Outcome()> check;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "Fisher identity for one behaviour", 1.0, fisher_identity},
        {2, "null r_bar is uniform", 10.0, null_uniformity},
        {3, "anomaly rate calibrated to v", 30.0, anomaly_rate},
        {4, "gate matches scalar reference", 5.0, eventizer_oracle},
        {5, "static scene is quiescent", 10.0, quiescence},
        {6, "cube box matches corner projection", 5.0, geometric_truth},
        {7, "generate is thread-count deterministic", 120.0, determinism},
        {8, "fuzziness contract", 0.0, fuzziness},
        {9, "class census and omega recomputation", 0.0, class_census},
        {10, "validate detects single-byte corruption", 0.0, validation},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
            o.pass = false;
            o.detail += fmt(" (over the %.0f s budget)", c.budget_seconds);
        }
        failed += !o.pass;
        std::printf("%s criterion %d: %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.number, c.title,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
