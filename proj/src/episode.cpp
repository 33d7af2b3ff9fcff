#include "dom/episode.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace dom {
namespace {

// full round-trip precision; strtod restores the exact bit pattern
void put_g(std::string& out, double v) {
    char buf[40];
    snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void put_vec(std::string& out, const Vec3& v) {
    put_g(out, v.x);
    out += ' ';
    put_g(out, v.y);
    out += ' ';
    put_g(out, v.z);
}

void put_quat(std::string& out, const Quat& q) {
    put_g(out, q.w);
    out += ' ';
    put_g(out, q.x);
    out += ' ';
    put_g(out, q.y);
    out += ' ';
    put_g(out, q.z);
}

char gripper_char(GripperState g) {
    switch (g) {
        case GripperState::Open: return 'o';
        case GripperState::Closing: return 'c';
        case GripperState::Closed: return 'x';
    }
    return '?';
}

GripperState gripper_from_char(char c, int tick) {
    switch (c) {
        case 'o': return GripperState::Open;
        case 'c': return GripperState::Closing;
        case 'x': return GripperState::Closed;
    }
    throw CorruptRecord("bad gripper state", tick);
}

const char* status_str(ObjectStatus s) {
    switch (s) {
        case ObjectStatus::Pending: return "pending";
        case ObjectStatus::Active: return "active";
        case ObjectStatus::Attached: return "attached";
        case ObjectStatus::Placed: return "placed";
        case ObjectStatus::Dropped: return "dropped";
    }
    return "?";
}

ObjectStatus status_from(const std::string& s, int tick) {
    if (s == "pending") return ObjectStatus::Pending;
    if (s == "active") return ObjectStatus::Active;
    if (s == "attached") return ObjectStatus::Attached;
    if (s == "placed") return ObjectStatus::Placed;
    if (s == "dropped") return ObjectStatus::Dropped;
    throw CorruptRecord("bad object status: " + s, tick);
}

EventKind event_from(const std::string& s, int tick) {
    if (s == "grasped") return EventKind::Grasped;
    if (s == "released") return EventKind::Released;
    if (s == "placed") return EventKind::Placed;
    if (s == "dropped") return EventKind::Dropped;
    if (s == "direction_change") return EventKind::DirectionChange;
    if (s == "disturbance") return EventKind::Disturbance;
    if (s == "workspace_violation") return EventKind::WorkspaceViolation;
    if (s == "timeout") return EventKind::Timeout;
    throw CorruptRecord("bad event kind: " + s, tick);
}

Outcome outcome_from(const std::string& s) {
    if (s == "in_progress") return Outcome::InProgress;
    if (s == "success") return Outcome::Success;
    if (s == "drop") return Outcome::Drop;
    if (s == "timeout") return Outcome::Timeout;
    if (s == "aborted") return Outcome::Aborted;
    throw CorruptRecord("bad outcome: " + s, -1);
}

// guarded "key=value" token read; truncated lines surface as CorruptRecord
std::string field_after(std::istringstream& in, const char* prefix, int tick) {
    std::string tok;
    if (!(in >> tok) || tok.rfind(prefix, 0) != 0)
        throw CorruptRecord(std::string("missing field ") + prefix, tick);
    return tok.substr(std::strlen(prefix));
}

double read_g(std::istringstream& in, int tick) {
    std::string tok;
    if (!(in >> tok)) throw CorruptRecord("missing number", tick);
    char* end = nullptr;
    double v = strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw CorruptRecord("bad number: " + tok, tick);
    return v;
}

Vec3 read_vec(std::istringstream& in, int tick) {
    Vec3 v;
    v.x = read_g(in, tick);
    v.y = read_g(in, tick);
    v.z = read_g(in, tick);
    return v;
}

Quat read_quat(std::istringstream& in, int tick) {
    Quat q;
    q.w = read_g(in, tick);
    q.x = read_g(in, tick);
    q.y = read_g(in, tick);
    q.z = read_g(in, tick);
    return q;
}

}  // namespace

std::string write_episode(const EpisodeLog& log) {
    std::string out;
    char buf[128];
    snprintf(buf, sizeof(buf), "DOMEP v%d seed=%" PRIu64 " config=%016" PRIx64 " dt=",
             log.schema_version, log.seed, log.config_digest);
    out += buf;
    put_g(out, log.dt);
    out += " scenario=";
    out += log.scenario;
    out += '\n';

    for (const auto& tr : log.ticks) {
        out += "T ";
        out += std::to_string(tr.tick);
        out += " phase=";
        out += to_string(tr.phase);
        out += " src=";
        out += std::to_string(tr.command_source);
        out += " ee ";
        put_vec(out, tr.ee_position);
        out += ' ';
        put_quat(out, tr.ee_orientation);
        out += ' ';
        put_vec(out, tr.ee_velocity);
        out += " grip=";
        out += gripper_char(tr.gripper);
        out += " att=";
        out += std::to_string(tr.attached_object);
        out += '\n';

        out += "C hold=";
        out += tr.command.hold ? '1' : '0';
        out += " tgt ";
        put_vec(out, tr.command.target_position);
        out += ' ';
        put_quat(out, tr.command.target_orientation);
        out += " grip=";
        out += tr.command.gripper_command == GripperCommand::Close ? "close" : "open";
        out += '\n';

        for (const auto& o : tr.objects) {
            out += "O ";
            out += std::to_string(o.id);
            out += ' ';
            out += o.label;
            out += ' ';
            out += status_str(o.status);
            out += ' ';
            put_vec(out, o.position);
            out += ' ';
            put_quat(out, o.orientation);
            out += ' ';
            put_vec(out, o.velocity);
            out += '\n';
        }
        for (const auto& e : tr.events) {
            out += "E ";
            out += to_string(e.kind);
            out += ' ';
            out += std::to_string(e.object_id);
            out += '\n';
        }
    }

    out += "F outcome=";
    out += to_string(log.footer.outcome);
    out += " success=";
    out += log.footer.success ? '1' : '0';
    out += " path=";
    put_g(out, log.footer.path_length);
    out += " time=";
    put_g(out, log.footer.completion_time);
    out += " placed=";
    for (size_t i = 0; i < log.footer.placed.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(log.footer.placed[i].first);
        out += ':';
        out += log.footer.placed[i].second ? '1' : '0';
    }
    out += '\n';
    return out;
}

EpisodeLog read_episode(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line)) throw CorruptRecord("empty file", -1);

    EpisodeLog log;
    {
        std::istringstream h(line);
        std::string magic;
        h >> magic;
        if (magic != "DOMEP") throw SchemaMismatch("not an episode file");
        std::string ver;
        h >> ver;
        if (ver.size() < 2 || ver[0] != 'v') throw SchemaMismatch("missing schema version");
        int v = std::stoi(ver.substr(1));
        if (v != kEpisodeSchemaVersion)
            throw SchemaMismatch("unsupported schema version v" + std::to_string(v));
        log.schema_version = v;
        std::string tok;
        while (h >> tok) {
            if (tok.rfind("seed=", 0) == 0) {
                log.seed = strtoull(tok.c_str() + 5, nullptr, 10);
            } else if (tok.rfind("config=", 0) == 0) {
                log.config_digest = strtoull(tok.c_str() + 7, nullptr, 16);
            } else if (tok.rfind("dt=", 0) == 0) {
                log.dt = strtod(tok.c_str() + 3, nullptr);
            } else if (tok.rfind("scenario=", 0) == 0) {
                std::string rest;
                std::getline(h, rest);
                log.scenario = tok.substr(9) + rest;
            }
        }
    }

    bool footer_seen = false;
    TickRecord* cur = nullptr;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        int cur_tick = cur ? cur->tick : -1;
        if (tag == "T") {
            TickRecord tr;
            if (!(ls >> tr.tick)) throw CorruptRecord("missing tick number", cur_tick);
            tr.phase = phase_from_string(field_after(ls, "phase=", tr.tick));
            tr.command_source = std::stoi(field_after(ls, "src=", tr.tick));
            std::string tok;
            ls >> tok;  // "ee"
            tr.ee_position = read_vec(ls, tr.tick);
            tr.ee_orientation = read_quat(ls, tr.tick);
            tr.ee_velocity = read_vec(ls, tr.tick);
            std::string grip = field_after(ls, "grip=", tr.tick);
            if (grip.empty()) throw CorruptRecord("missing gripper state", tr.tick);
            tr.gripper = gripper_from_char(grip[0], tr.tick);
            tr.attached_object = std::stoi(field_after(ls, "att=", tr.tick));
            log.ticks.push_back(std::move(tr));
            cur = &log.ticks.back();
        } else if (tag == "C") {
            if (!cur) throw CorruptRecord("command before first tick", -1);
            cur->command.hold = field_after(ls, "hold=", cur_tick) == "1";
            std::string tok;
            ls >> tok;  // "tgt"
            cur->command.target_position = read_vec(ls, cur_tick);
            cur->command.target_orientation = read_quat(ls, cur_tick);
            cur->command.gripper_command = field_after(ls, "grip=", cur_tick) == "close"
                                               ? GripperCommand::Close
                                               : GripperCommand::Open;
        } else if (tag == "O") {
            if (!cur) throw CorruptRecord("object before first tick", -1);
            TickObject o;
            ls >> o.id >> o.label;
            std::string st;
            ls >> st;
            o.status = status_from(st, cur_tick);
            o.position = read_vec(ls, cur_tick);
            o.orientation = read_quat(ls, cur_tick);
            o.velocity = read_vec(ls, cur_tick);
            if (!ls) throw CorruptRecord("truncated object record", cur_tick);
            cur->objects.push_back(std::move(o));
        } else if (tag == "E") {
            if (!cur) throw CorruptRecord("event before first tick", -1);
            std::string kind;
            int oid;
            if (!(ls >> kind >> oid)) throw CorruptRecord("truncated event record", cur_tick);
            cur->events.push_back({event_from(kind, cur_tick), cur->tick, oid});
        } else if (tag == "F") {
            std::string tok;
            while (ls >> tok) {
                if (tok.rfind("outcome=", 0) == 0) {
                    log.footer.outcome = outcome_from(tok.substr(8));
                } else if (tok.rfind("success=", 0) == 0) {
                    log.footer.success = tok.substr(8) == "1";
                } else if (tok.rfind("path=", 0) == 0) {
                    log.footer.path_length = strtod(tok.c_str() + 5, nullptr);
                } else if (tok.rfind("time=", 0) == 0) {
                    log.footer.completion_time = strtod(tok.c_str() + 5, nullptr);
                } else if (tok.rfind("placed=", 0) == 0) {
                    std::string list = tok.substr(7);
                    size_t pos = 0;
                    while (pos < list.size()) {
                        size_t colon = list.find(':', pos);
                        size_t comma = list.find(',', pos);
                        if (comma == std::string::npos) comma = list.size();
                        int id = std::stoi(list.substr(pos, colon - pos));
                        bool flag = list.substr(colon + 1, comma - colon - 1) == "1";
                        log.footer.placed.emplace_back(id, flag);
                        pos = comma + 1;
                    }
                }
            }
            footer_seen = true;
        } else {
            throw CorruptRecord("unknown record tag: " + tag, cur_tick);
        }
    }
    if (!footer_seen)
        throw CorruptRecord("missing footer; file truncated",
                            log.ticks.empty() ? 0 : log.ticks.back().tick);
    for (size_t i = 0; i < log.ticks.size(); ++i)
        if (log.ticks[i].tick != static_cast<int>(i))
            throw CorruptRecord("non-contiguous tick records", static_cast<int>(i));
    return log;
}

uint64_t episode_digest(const EpisodeLog& log) {
    std::string bytes = write_episode(log);
    return fnv1a(bytes.data(), bytes.size());
}

EpisodeFooter recompute_footer(const EpisodeLog& log, const OutcomeSpec& spec,
                               Outcome outcome) {
    EpisodeFooter f;
    f.outcome = outcome;
    f.success = outcome == Outcome::Success;
    for (size_t i = 1; i < log.ticks.size(); ++i)
        f.path_length += (log.ticks[i].ee_position - log.ticks[i - 1].ee_position).norm();
    f.completion_time = log.ticks.empty() ? 0.0 : log.ticks.back().tick * log.dt;
    for (int id : spec.instructed_ids) {
        bool placed = false;
        for (const auto& tr : log.ticks)
            for (const auto& e : tr.events)
                if (e.kind == EventKind::Placed && e.object_id == id) placed = true;
        f.placed.emplace_back(id, placed);
    }
    return f;
}

}  // namespace dom
