#include <antgen/dataset_io.hpp>

#include <cmath>
#include <set>

namespace antgen {

using nlohmann::json;

namespace {

// Reads one JSON object, tracking its location and which keys were consumed
// so leftovers can be reported as unknown.
class ObjectReader
{
public:
    ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    [[nodiscard]] std::string child_path(std::string_view key) const
    {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json* find(std::string_view key)
    {
        seen_.emplace(key);
        const auto it = node_.find(std::string(key));
        return it == node_.end() ? nullptr : &*it;
    }

    const json& require(std::string_view key)
    {
        const json* j = find(key);
        if (!j)
            throw ConfigError(child_path(key), "missing required field");
        return *j;
    }

    void real(std::string_view key, double& out)
    {
        if (const json* j = find(key)) {
            if (!j->is_number())
                throw ConfigError(child_path(key), "expected a number");
            out = j->get<double>();
            if (!std::isfinite(out))
                throw ConfigError(child_path(key), "must be finite");
        }
    }

    void real_in(std::string_view key, double& out, double lo, double hi)
    {
        real(key, out);
        if (!(out >= lo && out <= hi))
            throw ConfigError(child_path(key), "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
    }

    void positive(std::string_view key, double& out)
    {
        real(key, out);
        if (!(out > 0.0))
            throw ConfigError(child_path(key), "must be > 0");
    }

    void non_negative(std::string_view key, double& out)
    {
        real(key, out);
        if (!(out >= 0.0))
            throw ConfigError(child_path(key), "must be >= 0");
    }

    void integer(std::string_view key, int& out, int lo, int hi)
    {
        if (const json* j = find(key)) {
            if (!j->is_number_integer())
                throw ConfigError(child_path(key), "expected an integer");
            const auto v = j->get<long long>();
            if (v < lo || v > hi)
                throw ConfigError(child_path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            out = static_cast<int>(v);
        }
    }

    void boolean(std::string_view key, bool& out)
    {
        if (const json* j = find(key)) {
            if (!j->is_boolean())
                throw ConfigError(child_path(key), "expected true or false");
            out = j->get<bool>();
        }
    }

    std::optional<std::string> string(std::string_view key)
    {
        if (const json* j = find(key)) {
            if (!j->is_string())
                throw ConfigError(child_path(key), "expected a string");
            return j->get<std::string>();
        }
        return std::nullopt;
    }

    void finish() const
    {
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!seen_.contains(it.key()))
                throw ConfigError(child_path(it.key()), "unknown key");
    }

private:
    static std::string fmt(double x)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", x);
        return buf;
    }

    const json& node_;
    std::string path_;
    std::set<std::string, std::less<>> seen_;
};

void read_spec(const json& node, const std::string& path, BehaviourSpec& spec)
{
    ObjectReader r(node, path);
    r.real("mu", spec.mu);
    r.non_negative("sigma", spec.sigma);
    r.boolean("include", spec.include_in_anomaly);
    r.finish();
}

constexpr std::array<std::string_view, 5> kAxisGroups = {"translation", "rotation", "scale", "init_rotation",
                                                         "init_position"};
constexpr std::array<std::string_view, 3> kAxes = {"x", "y", "z"};

// Overlay a behaviours block onto `table`; unspecified entries keep their value.
void read_behaviours(const json& node, const std::string& path, BehaviourTable& table)
{
    ObjectReader r(node, path);
    for (std::size_t g = 0; g < kAxisGroups.size(); ++g) {
        const json* group = r.find(kAxisGroups[g]);
        if (!group)
            continue;
        const std::string group_path = r.child_path(kAxisGroups[g]);
        ObjectReader axes(*group, group_path);
        for (std::size_t a = 0; a < kAxes.size(); ++a)
            if (const json* spec = axes.find(kAxes[a]))
                read_spec(*spec, axes.child_path(kAxes[a]), table[g * 3 + a]);
        axes.finish();
    }
    if (const json* noise = r.find("surface_noise"))
        read_spec(*noise, r.child_path("surface_noise"), table[index_of(Behaviour::surface_noise)]);
    r.finish();
}

std::filesystem::path resolve_path(const std::string& raw, const std::filesystem::path& base_dir)
{
    std::filesystem::path p(raw);
    if (p.is_relative() && !base_dir.empty())
        p = base_dir / p;
    return p.lexically_normal();
}

json spec_to_json(const BehaviourSpec& s)
{
    return json{{"mu", s.mu}, {"sigma", s.sigma}, {"include", s.include_in_anomaly}};
}

json behaviours_to_json(const BehaviourTable& table)
{
    json out = json::object();
    for (std::size_t g = 0; g < kAxisGroups.size(); ++g) {
        json axes = json::object();
        for (std::size_t a = 0; a < kAxes.size(); ++a)
            axes[std::string(kAxes[a])] = spec_to_json(table[g * 3 + a]);
        out[std::string(kAxisGroups[g])] = axes;
    }
    out["surface_noise"] = spec_to_json(table[index_of(Behaviour::surface_noise)]);
    return out;
}

} // namespace

SceneConfig read_config(std::string_view text, const std::filesystem::path& base_dir)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }

    SceneConfig cfg;
    ObjectReader r(root, "");

    const json& seed = r.require("seed");
    if (!seed.is_number_unsigned())
        throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();
    r.require("agents");
    r.integer("agents", cfg.agent_count, 1, 1 << 20);
    r.require("frames");
    r.integer("frames", cfg.frame_count, 1, 1 << 24);
    r.positive("dt", cfg.dt);
    if (auto mode = r.string("edge_mode")) {
        if (*mode == "respawn")
            cfg.edge_mode = EdgeMode::respawn;
        else if (*mode == "bounce")
            cfg.edge_mode = EdgeMode::bounce;
        else
            throw ConfigError("edge_mode", "expected \"respawn\" or \"bounce\"");
    }

    if (const json* node = r.find("stats")) {
        ObjectReader s(*node, "stats");
        s.real_in("v", cfg.stats.v, 0.0, 1.0);
        s.real_in("z", cfg.stats.z, 0.0, 1.0);
        if (auto tail = s.string("tail_mode")) {
            if (*tail == "two_sided")
                cfg.stats.tail_mode = TailMode::two_sided;
            else if (*tail == "lower_tail")
                cfg.stats.tail_mode = TailMode::lower_tail;
            else
                throw ConfigError("stats.tail_mode", "expected \"two_sided\" or \"lower_tail\"");
        }
        s.real("p_floor", cfg.stats.p_floor);
        if (!(cfg.stats.p_floor > 0.0 && cfg.stats.p_floor < 1.0))
            throw ConfigError("stats.p_floor", "must lie in (0, 1)");
        s.finish();
    }

    if (const json* node = r.find("camera")) {
        ObjectReader c(*node, "camera");
        c.integer("width", cfg.camera.width, 1, 65535);
        c.integer("height", cfg.camera.height, 1, 65535);
        c.real("fov_degrees", cfg.camera.fov_degrees);
        if (!(cfg.camera.fov_degrees > 1.0 && cfg.camera.fov_degrees < 179.0))
            throw ConfigError("camera.fov_degrees", "must lie in (1, 179)");
        c.positive("near", cfg.camera.near);
        c.real("far", cfg.camera.far);
        if (!(cfg.camera.far > cfg.camera.near))
            throw ConfigError("camera.far", "must exceed camera.near");
        c.finish();
    }

    if (const json* node = r.find("render")) {
        ObjectReader g(*node, "render");
        g.real_in("background_mean", cfg.render.background_mean, 0.0, 1.0);
        g.non_negative("background_sigma", cfg.render.background_sigma);
        g.non_negative("fog_density", cfg.render.fog_density);
        if (const json* t = g.find("fog_target"); t && !t->is_null()) {
            double target = 0.0;
            g.real_in("fog_target", target, 0.0, 1.0);
            cfg.render.fog_target = target;
        }
        if (const json* l = g.find("light_direction")) {
            if (!l->is_array() || l->size() != 3 || !(*l)[0].is_number() || !(*l)[1].is_number() ||
                !(*l)[2].is_number())
                throw ConfigError("render.light_direction", "expected [x, y, z]");
            Eigen::Vector3d d((*l)[0].get<double>(), (*l)[1].get<double>(), (*l)[2].get<double>());
            if (!(d.norm() > 0.0) || !d.allFinite())
                throw ConfigError("render.light_direction", "must be a non-zero finite vector");
            // Leave already-unit vectors bit-exact so echoes reread identically.
            if (std::abs(d.norm() - 1.0) > 1e-12)
                d.normalize();
            cfg.render.light_direction = d;
        }
        g.real_in("ambient", cfg.render.ambient, 0.0, 1.0);
        g.finish();
    }

    if (const json* node = r.find("eventizer")) {
        ObjectReader e(*node, "eventizer");
        e.positive("beta", cfg.eventizer.beta);
        e.finish();
    }

    if (const json* node = r.find("geometry")) {
        ObjectReader g(*node, "geometry");
        g.integer("segments", cfg.tessellation.segments, 3, 4096);
        g.integer("subdivisions", cfg.tessellation.subdivisions, 0, 6);
        g.integer("noise_resolution", cfg.noise_resolution, 1, 4096);
        if (auto p = g.string("teapot_obj"))
            cfg.assets.teapot = resolve_path(*p, base_dir);
        if (auto p = g.string("suzanne_obj"))
            cfg.assets.suzanne = resolve_path(*p, base_dir);
        g.finish();
    }

    BehaviourTable global = default_behaviours();
    if (const json* node = r.find("behaviours"))
        read_behaviours(*node, "behaviours", global);

    const json& classes = r.require("classes");
    if (!classes.is_array() || classes.empty())
        throw ConfigError("classes", "expected a non-empty array");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const std::string path = "classes[" + std::to_string(i) + "]";
        ObjectReader c(classes[i], path);
        AgentClassConfig cls;
        const auto shape = c.string("shape");
        if (!shape)
            throw ConfigError(path + ".shape", "missing required field");
        const auto id = parse_shape_name(*shape);
        if (!id)
            throw ConfigError(path + ".shape", "unknown shape '" + *shape + "'");
        cls.shape = *id;
        c.non_negative("weight", cls.weight);
        cls.behaviours = global;
        if (const json* node = c.find("behaviours"))
            read_behaviours(*node, path + ".behaviours", cls.behaviours);
        c.finish();
        cfg.classes.push_back(cls);
    }
    r.finish();

    double total_weight = 0.0;
    for (const auto& c : cfg.classes)
        total_weight += c.weight;
    if (!(total_weight > 0.0))
        throw ConfigError("classes", "at least one class weight must be > 0");

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("<root>", e.what());
    }
    return cfg;
}

SceneConfig read_config_file(const std::filesystem::path& path)
{
    return read_config(read_file(path), path.parent_path());
}

json config_to_json(const SceneConfig& cfg)
{
    json j;
    j["seed"] = cfg.seed;
    j["agents"] = cfg.agent_count;
    j["frames"] = cfg.frame_count;
    j["dt"] = cfg.dt;
    j["edge_mode"] = std::string(to_string(cfg.edge_mode));
    j["stats"] = {{"v", cfg.stats.v},
                  {"z", cfg.stats.z},
                  {"tail_mode", std::string(to_string(cfg.stats.tail_mode))},
                  {"p_floor", cfg.stats.p_floor}};
    j["camera"] = {{"width", cfg.camera.width},
                   {"height", cfg.camera.height},
                   {"fov_degrees", cfg.camera.fov_degrees},
                   {"near", cfg.camera.near},
                   {"far", cfg.camera.far}};
    const auto& l = cfg.render.light_direction;
    j["render"] = {{"background_mean", cfg.render.background_mean},
                   {"background_sigma", cfg.render.background_sigma},
                   {"fog_density", cfg.render.fog_density},
                   {"fog_target", cfg.render.fog_target ? json(*cfg.render.fog_target) : json(nullptr)},
                   {"light_direction", {l.x(), l.y(), l.z()}},
                   {"ambient", cfg.render.ambient}};
    j["eventizer"] = {{"beta", cfg.eventizer.beta}};
    j["geometry"] = {{"segments", cfg.tessellation.segments},
                     {"subdivisions", cfg.tessellation.subdivisions},
                     {"noise_resolution", cfg.noise_resolution},
                     {"teapot_obj", cfg.assets.teapot.string()},
                     {"suzanne_obj", cfg.assets.suzanne.string()}};
    json classes = json::array();
    for (const auto& c : cfg.classes)
        classes.push_back({{"shape", std::string(shape_name(c.shape))},
                           {"weight", c.weight},
                           {"behaviours", behaviours_to_json(c.behaviours)}});
    j["classes"] = classes;
    return j;
}

} // namespace antgen
