#include "qosheft/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "qosheft/errors.hpp"

namespace qosheft::io {

namespace {

Json rational_json(Rational const & value) {
    if (denominator(value) == 1 && value >= std::numeric_limits<std::int64_t>::min() &&
        value <= std::numeric_limits<std::int64_t>::max()) {
        return numerator(value).convert_to<std::int64_t>();
    }
    return to_string(value);
}

// A JSON value together with its path, for error messages.
class Node {
public:
    Node(Json const & json, std::string path) : json_(json), path_(std::move(path)) {}

    [[noreturn]] void fail(std::string const & message) const { throw ParseError(path_ + ": " + message); }

    Json const & json() const { return json_; }
    std::string const & path() const { return path_; }

    void expect_object(std::initializer_list<std::string_view> allowed) const {
        if (!json_.is_object()) fail("expected an object");
        for (auto const & [key, value] : json_.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail("unknown field '" + key + "'");
        }
    }

    bool has(std::string_view key) const { return json_.contains(std::string(key)); }

    Node operator[](std::string_view key) const {
        auto it = json_.find(std::string(key));
        if (it == json_.end()) fail("missing field '" + std::string(key) + "'");
        return Node(*it, path_ + "." + std::string(key));
    }

    std::vector<Node> elements() const {
        if (!json_.is_array()) fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < json_.size(); ++i) out.emplace_back(json_[i], path_ + "[" + std::to_string(i) + "]");
        return out;
    }

    std::vector<std::pair<std::string, Node>> members() const {
        if (!json_.is_object()) fail("expected an object");
        std::vector<std::pair<std::string, Node>> out;
        for (auto const & [key, value] : json_.items()) out.emplace_back(key, Node(value, path_ + "." + key));
        return out;
    }

    std::string string() const {
        if (!json_.is_string()) fail("expected a string");
        return json_.get<std::string>();
    }

    std::int64_t integer() const {
        if (!json_.is_number_integer()) fail("expected an integer");
        if (json_.is_number_unsigned() && json_.get<std::uint64_t>() > std::uint64_t(INT64_MAX)) fail("integer too large");
        return json_.get<std::int64_t>();
    }

    bool boolean() const {
        if (!json_.is_boolean()) fail("expected true or false");
        return json_.get<bool>();
    }

    Rational rational() const {
        try {
            if (json_.is_number_integer()) return Rational(integer());
            if (json_.is_number_float()) {
                char buf[64];
                auto res = std::to_chars(buf, buf + sizeof buf, json_.get<double>());
                return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
            }
            if (json_.is_string()) return parse_rational(json_.get<std::string>());
        } catch (ParseError const & e) {
            fail(e.what());
        }
        fail("expected a number or a \"p/q\" string");
    }

    std::vector<Tick> ticks() const {
        std::vector<Tick> out;
        for (auto const & e : elements()) out.push_back(e.integer());
        return out;
    }

private:
    Json const & json_;
    std::string path_;
};

DagSpec read_dag(Node const & n) {
    n.expect_object({"dag_id", "period", "release", "tasks", "edges"});
    DagSpec dag;
    dag.dag_id = n["dag_id"].string();
    dag.period = n["period"].integer();
    if (n.has("release")) dag.release = n["release"].integer();
    if (dag.release < 0) n["release"].fail("release must be non-negative");
    for (auto const & t : n["tasks"].elements()) {
        t.expect_object({"id", "versions", "exec_time"});
        TaskSpec task;
        task.task_id = t["id"].string();
        for (auto const & v : t["versions"].elements()) {
            v.expect_object({"level", "reward"});
            std::int64_t const level = v["level"].integer();
            if (level < 1 || level > 1'000'000) v["level"].fail("level out of range");
            task.versions.push_back(QualityVersion{static_cast<int>(level), v["reward"].rational()});
        }
        for (auto const & [vm, times] : t["exec_time"].members()) task.exec_time[vm] = times.ticks();
        dag.tasks.push_back(std::move(task));
    }
    if (n.has("edges")) {
        for (auto const & e : n["edges"].elements()) {
            e.expect_object({"src", "dst", "data_volume"});
            dag.edges.push_back(EdgeSpec{e["src"].string(), e["dst"].string(), e["data_volume"].rational()});
        }
    }
    return dag;
}

Platform read_platform(Node const & n) {
    n.expect_object({"background_period", "vms", "bandwidth", "event_queues"});
    Platform p;
    p.background_period = n["background_period"].integer();
    for (auto const & v : n["vms"].elements()) {
        v.expect_object({"id", "host"});
        p.vms.push_back(VmDescriptor{v["id"].string(), v.has("host") ? v["host"].string() : std::string()});
    }
    for (auto const & row : n["bandwidth"].elements()) {
        std::vector<Rational> values;
        for (auto const & x : row.elements()) values.push_back(x.rational());
        p.bandwidth.push_back(std::move(values));
    }
    auto const queues = n["event_queues"];
    for (auto const & [vm, slots] : queues.members()) {
        if (std::none_of(p.vms.begin(), p.vms.end(), [&](VmDescriptor const & d) { return d.vm_id == vm; })) {
            slots.fail("no VM named '" + vm + "'");
        }
    }
    for (auto const & vm : p.vms) {
        EventQueue q{vm.vm_id, {}};
        if (!queues.has(vm.vm_id)) queues.fail("missing idle slots of VM '" + vm.vm_id + "'");
        for (auto const & slot : queues[vm.vm_id].elements()) {
            auto const pair = slot.elements();
            if (pair.size() != 2) slot.fail("expected [start, duration]");
            q.slots.push_back(IdleSlot{pair[0].integer(), pair[1].integer()});
        }
        p.queues.push_back(std::move(q));
    }
    return p;
}

HyperSchedule read_schedule(Node const & n) {
    n.expect_object({"hyperperiod", "repetition_factor", "horizon", "entries", "instances", "last_end", "failures"});
    HyperSchedule hs;
    hs.hyperperiod = n["hyperperiod"].integer();
    std::int64_t const r = n["repetition_factor"].integer();
    if (r < 1 || r > 1'000'000) n["repetition_factor"].fail("must lie in [1, 1000000]");
    hs.repetition_factor = static_cast<int>(r);
    if (n.has("horizon") && n["horizon"].integer() != hs.horizon()) {
        n["horizon"].fail("does not equal hyperperiod * repetition_factor");
    }
    for (auto const & e : n["entries"].elements()) {
        e.expect_object({"instance", "dag", "task", "cycle", "vm", "level", "start", "finish"});
        ScheduleEntry entry;
        entry.instance = TaskInstance{e["instance"].string(), e["task"].string(), e["dag"].string(),
                                      e["cycle"].integer()};
        entry.vm_id = e["vm"].string();
        std::int64_t const level = e["level"].integer();
        if (level < 0 || level > 1'000'000) e["level"].fail("level out of range");
        entry.level = static_cast<int>(level);
        entry.start = e["start"].integer();
        entry.finish = e["finish"].integer();
        hs.entries.push_back(std::move(entry));
    }
    if (n.has("instances")) {
        for (auto const & i : n["instances"].elements()) {
            i.expect_object({"dag", "cycle", "window", "status"});
            auto const w = i["window"].elements();
            if (w.size() != 2) i["window"].fail("expected [start, end]");
            std::string const status = i["status"].string();
            if (status != "scheduled" && status != "failed") i["status"].fail("expected \"scheduled\" or \"failed\"");
            hs.instances.push_back(InstanceRecord{i["dag"].string(), i["cycle"].integer(),
                                                  CycleWindow{w[0].integer(), w[1].integer()}, status == "scheduled"});
        }
    }
    if (n.has("last_end")) {
        for (auto const & [dag, t] : n["last_end"].members()) hs.per_dag_last_end[dag] = t.integer();
    }
    if (n.has("failures")) {
        for (auto const & f : n["failures"].elements()) {
            f.expect_object({"dag", "cycle", "reason"});
            hs.failures.push_back(Failure{f["dag"].string(), f["cycle"].integer(),
                                          f.has("reason") ? f["reason"].string() : std::string()});
        }
    }
    return hs;
}

template <class T, class Reader>
T load(std::filesystem::path const & path, Reader reader) {
    std::string const name = path.string();
    Json const json = parse_json(read_file(path), name);
    try {
        return reader(Node(json, "$"));
    } catch (ParseError const & e) {
        throw ParseError(name + ": " + e.what());
    }
}

} // namespace

Json to_json(DagSpec const & dag) {
    Json j;
    j["dag_id"] = dag.dag_id;
    j["period"] = dag.period;
    j["release"] = dag.release;
    j["tasks"] = Json::array();
    for (auto const & task : dag.tasks) {
        Json t;
        t["id"] = task.task_id;
        t["versions"] = Json::array();
        for (auto const & v : task.versions) t["versions"].push_back(Json{{"level", v.level}, {"reward", rational_json(v.reward)}});
        t["exec_time"] = Json::object();
        for (auto const & [vm, times] : task.exec_time) t["exec_time"][vm] = times;
        j["tasks"].push_back(std::move(t));
    }
    j["edges"] = Json::array();
    for (auto const & e : dag.edges) {
        j["edges"].push_back(Json{{"src", e.src}, {"dst", e.dst}, {"data_volume", rational_json(e.data_volume)}});
    }
    return j;
}

Json to_json(Platform const & platform) {
    Json j;
    j["background_period"] = platform.background_period;
    j["vms"] = Json::array();
    for (auto const & vm : platform.vms) j["vms"].push_back(Json{{"id", vm.vm_id}, {"host", vm.host_id}});
    j["bandwidth"] = Json::array();
    for (auto const & row : platform.bandwidth) {
        Json r = Json::array();
        for (auto const & x : row) r.push_back(rational_json(x));
        j["bandwidth"].push_back(std::move(r));
    }
    j["event_queues"] = Json::object();
    for (auto const & q : platform.queues) {
        Json slots = Json::array();
        for (auto const & s : q.slots) slots.push_back(Json::array({s.start, s.duration}));
        j["event_queues"][q.vm_id] = std::move(slots);
    }
    return j;
}

Json to_json(HyperSchedule const & hs) {
    Json j;
    j["hyperperiod"] = hs.hyperperiod;
    j["repetition_factor"] = hs.repetition_factor;
    j["horizon"] = hs.horizon();
    j["entries"] = Json::array();
    for (auto const & e : hs.entries) {
        j["entries"].push_back(Json{{"instance", e.instance.instance_id},
                                    {"dag", e.instance.dag_id},
                                    {"task", e.instance.source_task},
                                    {"cycle", e.instance.cycle_index},
                                    {"vm", e.vm_id},
                                    {"level", e.level},
                                    {"start", e.start},
                                    {"finish", e.finish}});
    }
    j["instances"] = Json::array();
    for (auto const & i : hs.instances) {
        j["instances"].push_back(Json{{"dag", i.dag_id},
                                      {"cycle", i.cycle},
                                      {"window", Json::array({i.window.start, i.window.end})},
                                      {"status", i.scheduled ? "scheduled" : "failed"}});
    }
    j["last_end"] = Json::object();
    for (auto const & [dag, t] : hs.per_dag_last_end) j["last_end"][dag] = t;
    j["failures"] = Json::array();
    for (auto const & f : hs.failures) {
        j["failures"].push_back(Json{{"dag", f.dag_id}, {"cycle", f.cycle}, {"reason", f.reason}});
    }
    return j;
}

DagSpec dag_from_json(Json const & json) { return read_dag(Node(json, "$")); }
Platform platform_from_json(Json const & json) { return read_platform(Node(json, "$")); }
HyperSchedule schedule_from_json(Json const & json) { return read_schedule(Node(json, "$")); }

Json parse_json(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (nlohmann::json::parse_error const & e) {
        std::size_t line = 1, column = 1;
        std::size_t const upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string message = e.what();
        if (auto pos = message.find("syntax error"); pos != std::string::npos) message = message.substr(pos);
        std::ostringstream os;
        os << source << ":" << line << ":" << column << ": " << message;
        throw ParseError(os.str());
    }
}

DagSpec load_dag(std::filesystem::path const & path) { return load<DagSpec>(path, read_dag); }
Platform load_platform(std::filesystem::path const & path) { return load<Platform>(path, read_platform); }
HyperSchedule load_schedule(std::filesystem::path const & path) { return load<HyperSchedule>(path, read_schedule); }

std::string dump(Json const & json) { return json.dump(2) + "\n"; }

void write_file(std::filesystem::path const & path, std::string const & contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << contents;
    if (!out) throw Error("failed writing " + path.string());
}

std::string read_file(std::filesystem::path const & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string gantt_csv(HyperSchedule const & hs, Platform const & platform) {
    struct Row {
        std::string vm;
        Tick start, finish;
        std::string dag, task;
        int level;
        std::string origin;
    };
    std::vector<Row> rows;
    Tick const horizon = hs.horizon();
    for (auto const & q : platform.queues) {
        auto const idle = tile_queue(q, platform.background_period, horizon);
        Tick t = 0;
        for (auto const & s : idle.slots) {
            if (s.start > t) rows.push_back({q.vm_id, t, s.start, "", "", 0, "background"});
            t = std::max(t, s.end());
        }
        if (t < horizon) rows.push_back({q.vm_id, t, horizon, "", "", 0, "background"});
    }
    for (auto const & e : hs.entries) {
        rows.push_back({e.vm_id, e.start, e.finish, e.instance.dag_id, e.instance.instance_id, e.level, "scheduled"});
    }
    std::stable_sort(rows.begin(), rows.end(), [&](Row const & a, Row const & b) {
        auto const va = platform.vm_index(a.vm);
        auto const vb = platform.vm_index(b.vm);
        return std::tie(va, a.start) < std::tie(vb, b.start);
    });
    std::ostringstream os;
    os << "vm,start,finish,dag,task,level,origin\n";
    for (auto const & r : rows) {
        os << r.vm << "," << r.start << "," << r.finish << "," << r.dag << "," << r.task << ","
           << (r.level > 0 ? std::to_string(r.level) : std::string()) << "," << r.origin << "\n";
    }
    return os.str();
}

} // namespace qosheft::io
