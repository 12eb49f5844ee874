#include "ocindex/provenance.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <mutex>
#include <set>

#include "ocindex/error.hpp"
#include "ocindex/mapping.hpp"
#include "ocindex/ntriples.hpp"
#include "ocindex/vocab.hpp"

namespace ocindex {

namespace {

using namespace std::chrono;

bool parse_uint(std::string_view text, int& out) {
    if (text.empty()) {
        return false;
    }
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && p == text.data() + text.size();
}

constexpr std::string_view kDeleteHead = "DELETE DATA ";
constexpr std::string_view kInsertHead = "; INSERT DATA ";

std::string block(const std::vector<Quad>& quads) {
    if (quads.empty()) {
        return "{ }";
    }
    std::string out = "{\n";
    for (const auto& q : quads) {
        out += quad_line(q);
        out += '\n';
    }
    out += '}';
    return out;
}

class DeltaParser {
public:
    explicit DeltaParser(std::string_view text) : text_(text) {}

    Delta run() {
        Delta d;
        expect(kDeleteHead);
        d.removed = parse_block();
        expect(kInsertHead);
        d.added = parse_block();
        if (pos_ != text_.size()) {
            fail("trailing text after INSERT DATA block");
        }
        return d;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::SyntaxError, "delta line " + std::to_string(line_) + ": " + msg, line_);
    }

    void expect(std::string_view lit) {
        if (text_.substr(pos_, lit.size()) != lit) {
            fail("expected '" + std::string(lit) + "'");
        }
        pos_ += lit.size();
    }

    std::vector<Quad> parse_block() {
        if (text_.substr(pos_, 3) == "{ }") {
            pos_ += 3;
            return {};
        }
        expect("{\n");
        ++line_;
        std::vector<Quad> out;
        for (;;) {
            if (pos_ >= text_.size()) {
                fail("unterminated block");
            }
            if (text_[pos_] == '}') {
                ++pos_;
                break;
            }
            const auto nl = text_.find('\n', pos_);
            if (nl == std::string_view::npos) {
                fail("unterminated block");
            }
            auto quad = parse_nquad_line(text_.substr(pos_, nl - pos_), line_);
            if (!quad) {
                fail("empty line inside block");
            }
            out.push_back(std::move(*quad));
            pos_ = nl + 1;
            ++line_;
        }
        if (out.empty()) {
            fail("empty block must be written '{ }'");
        }
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

Term agent_term(const std::string& value) {
    if (is_valid_iri(value)) {
        return Term::iri(value);
    }
    return Term::literal(value);
}

Term time_term(Timestamp t) { return Term::literal(format_timestamp(t), vocab::kXsdDateTime); }

// Set difference helpers over canonically sorted vectors.
void erase_all(std::set<Quad>& state, const std::vector<Quad>& quads) {
    for (const auto& q : quads) {
        state.erase(q);
    }
}

void insert_all(std::set<Quad>& state, const std::vector<Quad>& quads) {
    state.insert(quads.begin(), quads.end());
}

} // namespace

std::string format_timestamp(Timestamp t) {
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    auto bad = [&] { return Error(Errc::ParseError, "bad timestamp '" + std::string(text) + "'"); };
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z') {
        throw bad();
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), mo) ||
        !parse_uint(text.substr(8, 2), d) || !parse_uint(text.substr(11, 2), h) ||
        !parse_uint(text.substr(14, 2), mi) || !parse_uint(text.substr(17, 2), s)) {
        throw bad();
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
        throw bad();
    }
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

Timestamp now_utc() { return floor<seconds>(system_clock::now()); }

void normalize(Delta& delta) {
    sort_canonical(delta.added);
    sort_canonical(delta.removed);
    const std::set<Quad> removed(delta.removed.begin(), delta.removed.end());
    for (const auto& q : delta.added) {
        if (removed.count(q) != 0) {
            throw Error(Errc::InvalidDelta, "quad both added and removed: " + quad_line(q));
        }
    }
}

std::string serialize_delta(const Delta& delta) {
    Delta d = delta;
    normalize(d);
    std::string out(kDeleteHead);
    out += block(d.removed);
    out += kInsertHead;
    out += block(d.added);
    return out;
}

Delta parse_delta(std::string_view text) {
    Delta d = DeltaParser(text).run();
    try {
        normalize(d);
    } catch (const Error& e) {
        throw Error(Errc::SyntaxError, e.what(), 1);
    }
    return d;
}

Snapshot ProvenanceLog::record_creation(const std::string& entity, const std::vector<Quad>& initial_quads,
                                        const std::string& agent, const std::string& source, Timestamp time,
                                        const std::string& description) {
    std::unique_lock lock(mutex_);
    auto [it, fresh] = logs_.try_emplace(entity);
    if (!fresh) {
        throw Error(Errc::AlreadyExists, "entity already has a provenance log: " + entity);
    }
    Snapshot s;
    s.entity = entity;
    s.seq = 1;
    s.generated_at = time;
    s.agent = agent;
    s.primary_source = source;
    s.description = description.empty() ? "The entity '" + entity + "' has been created." : description;
    try {
        store_.apply({}, initial_quads);
    } catch (...) {
        logs_.erase(it);
        throw;
    }
    it->second.push_back(s);
    return s;
}

Snapshot ProvenanceLog::record_update(const std::string& entity, Delta delta, const std::string& agent,
                                      const std::string& source, Timestamp time, const std::string& description) {
    normalize(delta);
    std::unique_lock lock(mutex_);
    auto it = logs_.find(entity);
    if (it == logs_.end()) {
        throw Error(Errc::NoSuchEntity, "no provenance log for " + entity);
    }
    auto& log = it->second;
    if (time <= log.back().generated_at) {
        throw Error(Errc::NonMonotonicTime, "update time " + format_timestamp(time) + " is not after " +
                                                format_timestamp(log.back().generated_at));
    }
    for (const auto& q : delta.removed) {
        if (!store_.contains(q)) {
            throw Error(Errc::RemovedQuadAbsent, "removed quad not in store: " + quad_line(q));
        }
    }
    std::erase_if(delta.added, [&](const Quad& q) { return store_.contains(q); });
    store_.apply(delta.removed, delta.added);

    log.back().invalidated_at = time;
    Snapshot s;
    s.entity = entity;
    s.seq = log.back().seq + 1;
    s.generated_at = time;
    s.agent = agent;
    s.primary_source = source;
    s.description = description.empty() ? "The entity '" + entity + "' has been modified." : description;
    s.delta = std::move(delta);
    log.push_back(s);
    return s;
}

std::vector<Quad> ProvenanceLog::reconstruct_at(const std::string& entity, Timestamp t) const {
    std::shared_lock lock(mutex_);
    auto it = logs_.find(entity);
    if (it == logs_.end()) {
        throw Error(Errc::NoSuchEntity, "no provenance log for " + entity);
    }
    const auto& log = it->second;
    if (t < log.front().generated_at) {
        throw Error(Errc::BeforeCreation, format_timestamp(t) + " precedes the creation of " + entity);
    }
    std::vector<Quad> current;
    {
        auto reader = store_.read();
        current = entity_closure(reader, entity);
    }
    std::set<Quad> state(current.begin(), current.end());
    for (auto s = log.rbegin(); s != log.rend() && s->generated_at > t; ++s) {
        erase_all(state, s->delta.added);
        insert_all(state, s->delta.removed);
    }
    std::vector<Quad> out(state.begin(), state.end());
    sort_canonical(out);
    return out;
}

std::vector<Snapshot> ProvenanceLog::history(const std::string& entity) const {
    std::shared_lock lock(mutex_);
    auto it = logs_.find(entity);
    if (it == logs_.end()) {
        throw Error(Errc::NoSuchEntity, "no provenance log for " + entity);
    }
    return it->second;
}

std::optional<Snapshot> ProvenanceLog::current_snapshot(const std::string& entity) const {
    std::shared_lock lock(mutex_);
    auto it = logs_.find(entity);
    if (it == logs_.end() || it->second.empty()) {
        return std::nullopt;
    }
    return it->second.back();
}

bool ProvenanceLog::contains(const std::string& entity) const {
    std::shared_lock lock(mutex_);
    return logs_.count(entity) != 0;
}

std::size_t ProvenanceLog::entity_count() const {
    std::shared_lock lock(mutex_);
    return logs_.size();
}

std::size_t ProvenanceLog::snapshot_count() const {
    std::shared_lock lock(mutex_);
    std::size_t n = 0;
    for (const auto& [_, log] : logs_) {
        n += log.size();
    }
    return n;
}

bool ProvenanceLog::integrity_ok() const {
    std::shared_lock lock(mutex_);
    for (const auto& [entity, log] : logs_) {
        if (log.empty() || !log.front().delta.empty()) {
            return false;
        }
        for (std::size_t i = 0; i < log.size(); ++i) {
            const auto& s = log[i];
            if (s.entity != entity || s.seq != i + 1) {
                return false;
            }
            if (i + 1 < log.size()) {
                if (log[i + 1].generated_at <= s.generated_at || s.invalidated_at != log[i + 1].generated_at) {
                    return false;
                }
            } else if (s.invalidated_at) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Quad> ProvenanceLog::to_quads() const {
    std::shared_lock lock(mutex_);
    std::vector<Quad> out;
    for (const auto& [entity, log] : logs_) {
        for (const auto& s : log) {
            const Term se = Term::iri(s.iri());
            const Term g = Term::iri(s.graph());
            auto add = [&](const std::string& p, Term o) { out.push_back({se, Term::iri(p), std::move(o), g}); };
            add(vocab::kType, Term::iri(vocab::kEntity));
            add(vocab::kSpecializationOf, Term::iri(entity));
            add(vocab::kGeneratedAtTime, time_term(s.generated_at));
            if (s.invalidated_at) {
                add(vocab::kInvalidatedAtTime, time_term(*s.invalidated_at));
            }
            if (!s.agent.empty()) {
                add(vocab::kWasAttributedTo, agent_term(s.agent));
            }
            if (!s.primary_source.empty()) {
                add(vocab::kHadPrimarySource, agent_term(s.primary_source));
            }
            if (!s.description.empty()) {
                add(vocab::kDescription, Term::literal(s.description));
            }
            if (s.seq > 1) {
                add(vocab::kWasDerivedFrom, Term::iri(entity + "/prov/se/" + std::to_string(s.seq - 1)));
                add(vocab::kHasUpdateQuery, Term::literal(serialize_delta(s.delta)));
            }
        }
    }
    return out;
}

void ProvenanceLog::load_quads(const std::vector<Quad>& quads) {
    std::map<std::string, Snapshot> by_iri;
    for (const auto& q : quads) {
        if (!q.graph || !q.subject.is_iri()) {
            continue;
        }
        const std::string& se = q.subject.value;
        const auto cut = se.rfind("/prov/se/");
        if (cut == std::string::npos || q.graph->value != se.substr(0, cut) + "/prov") {
            continue;
        }
        auto& s = by_iri[se];
        s.entity = se.substr(0, cut);
        int seq = 0;
        if (!parse_uint(std::string_view(se).substr(cut + 9), seq) || seq < 1) {
            throw Error(Errc::ParseError, "bad snapshot IRI " + se);
        }
        s.seq = static_cast<std::uint64_t>(seq);
        const std::string& p = q.predicate.value;
        if (p == vocab::kGeneratedAtTime) {
            s.generated_at = parse_timestamp(q.object.value);
        } else if (p == vocab::kInvalidatedAtTime) {
            s.invalidated_at = parse_timestamp(q.object.value);
        } else if (p == vocab::kWasAttributedTo) {
            s.agent = q.object.value;
        } else if (p == vocab::kHadPrimarySource) {
            s.primary_source = q.object.value;
        } else if (p == vocab::kDescription) {
            s.description = q.object.value;
        } else if (p == vocab::kHasUpdateQuery) {
            s.delta = parse_delta(q.object.value);
        }
    }
    std::map<std::string, std::vector<Snapshot>> logs;
    for (auto& [_, s] : by_iri) {
        logs[s.entity].push_back(std::move(s));
    }
    for (auto& [entity, log] : logs) {
        std::sort(log.begin(), log.end(), [](const Snapshot& a, const Snapshot& b) { return a.seq < b.seq; });
        for (std::size_t i = 0; i < log.size(); ++i) {
            if (log[i].seq != i + 1) {
                throw Error(Errc::ParseError, "snapshot sequence gap for " + entity);
            }
        }
    }
    std::unique_lock lock(mutex_);
    for (auto& [entity, log] : logs) {
        logs_[entity] = std::move(log);
    }
}

void ProvenanceLog::clear() {
    std::unique_lock lock(mutex_);
    logs_.clear();
}

} // namespace ocindex
