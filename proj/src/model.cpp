#include "ocindex/model.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "ocindex/error.hpp"

namespace ocindex {

namespace {

using std::chrono::sys_days;
using std::chrono::year_month_day;

int days_in_month(int y, int m) {
    const auto last = std::chrono::year_month_day_last{std::chrono::year{y} / std::chrono::month{static_cast<unsigned>(m)} /
                                                       std::chrono::last};
    return static_cast<int>(static_cast<unsigned>(last.day()));
}

struct Ymd {
    int y, m, d;
    auto operator<=>(const Ymd&) const = default;
};

sys_days to_sys(const Ymd& v) {
    return sys_days{year_month_day{std::chrono::year{v.y}, std::chrono::month{static_cast<unsigned>(v.m)},
                                   std::chrono::day{static_cast<unsigned>(v.d)}}};
}

// Month arithmetic clamps the day to the end of the target month.
Ymd add_months(const Ymd& v, int months) {
    const int total = v.y * 12 + (v.m - 1) + months;
    const int y = total / 12;
    const int m = total % 12 + 1;
    return {y, m, std::min(v.d, days_in_month(y, m))};
}

// later >= earlier
SignedDuration day_difference(const Ymd& later, const Ymd& earlier) {
    int months = (later.y * 12 + later.m) - (earlier.y * 12 + earlier.m);
    if (add_months(earlier, months) > later) {
        --months;
    }
    const Ymd anchor = add_months(earlier, months);
    const auto days = (to_sys(later) - to_sys(anchor)).count();
    return {false, months / 12, months % 12, static_cast<int>(days), Precision::Day};
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty() || s.size() > 9) {
        return false;
    }
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

std::string pad(int v, int width) {
    std::string s = std::to_string(v);
    if (static_cast<int>(s.size()) < width) {
        s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    }
    return s;
}

std::string agent_key(const Agent& a) {
    for (const auto& id : a.identifiers) {
        if (id.scheme == IdScheme::Orcid) {
            return "orcid:" + id.value;
        }
    }
    return "name:" + to_lower(a.name);
}

template <typename T>
void sorted_union(std::vector<T>& into, const std::vector<T>& from) {
    into.insert(into.end(), from.begin(), from.end());
    std::sort(into.begin(), into.end());
    into.erase(std::unique(into.begin(), into.end()), into.end());
}

std::string min_nonempty(const std::string& a, const std::string& b) {
    if (a.empty()) {
        return b;
    }
    if (b.empty()) {
        return a;
    }
    return std::min(a, b);
}

Agent merge_agents(const Agent& a, const Agent& b) {
    Agent out;
    out.iri = min_nonempty(a.iri, b.iri);
    if (a.name.size() != b.name.size()) {
        out.name = a.name.size() > b.name.size() ? a.name : b.name;
    } else {
        out.name = std::min(a.name, b.name);
    }
    out.identifiers = a.identifiers;
    sorted_union(out.identifiers, b.identifiers);
    return out;
}

std::vector<RoleInTime> merge_roles(const std::vector<RoleInTime>& a, const std::vector<RoleInTime>& b) {
    std::map<std::pair<Role, std::string>, RoleInTime> by_key;
    for (const auto* list : {&a, &b}) {
        for (const auto& r : *list) {
            const auto key = std::make_pair(r.role, agent_key(r.agent));
            auto [it, fresh] = by_key.try_emplace(key, r);
            if (!fresh) {
                RoleInTime& cur = it->second;
                cur.iri = min_nonempty(cur.iri, r.iri);
                cur.order = std::min(cur.order, r.order);
                cur.agent = merge_agents(cur.agent, r.agent);
            }
        }
    }
    std::map<Role, std::vector<std::pair<std::string, RoleInTime>>> per_role;
    for (auto& [key, r] : by_key) {
        per_role[key.first].emplace_back(key.second, r);
    }
    std::vector<RoleInTime> out;
    for (auto& [role, list] : per_role) {
        std::sort(list.begin(), list.end(), [](const auto& x, const auto& y) {
            return std::tie(x.second.order, x.first) < std::tie(y.second.order, y.first);
        });
        int prev = 0;
        for (auto& [key, r] : list) {
            r.order = std::max(prev + 1, r.order);
            prev = r.order;
            out.push_back(std::move(r));
        }
    }
    return out;
}

template <typename T, typename KeyFn>
std::vector<T> merge_by_key(const std::vector<T>& a, const std::vector<T>& b, KeyFn key) {
    std::map<decltype(key(a.front())), T> kept;
    for (const auto* list : {&a, &b}) {
        for (const auto& item : *list) {
            auto [it, fresh] = kept.try_emplace(key(item), item);
            if (!fresh && min_nonempty(item.iri, it->second.iri) != it->second.iri) {
                it->second = item;
            }
        }
    }
    std::vector<T> out;
    out.reserve(kept.size());
    for (auto& [k, v] : kept) {
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

void validate(const PartialDate& date) {
    if (date.year < 1 || date.year > 9999) {
        throw Error(Errc::InvalidDate, "year out of range: " + std::to_string(date.year));
    }
    if (date.day && !date.month) {
        throw Error(Errc::InvalidDate, "day given without month");
    }
    if (date.month && (*date.month < 1 || *date.month > 12)) {
        throw Error(Errc::InvalidDate, "month out of range: " + std::to_string(*date.month));
    }
    if (date.day && (*date.day < 1 || *date.day > days_in_month(date.year, *date.month))) {
        throw Error(Errc::InvalidDate, "day out of range: " + date.to_string());
    }
}

PartialDate PartialDate::truncated(Precision p) const {
    PartialDate out = *this;
    if (p < Precision::Day) {
        out.day.reset();
    }
    if (p < Precision::Month) {
        out.month.reset();
    }
    return out;
}

PartialDate PartialDate::parse(std::string_view text) {
    PartialDate date;
    const auto fail = [&] { return Error(Errc::InvalidDate, "not an ISO partial date: \"" + std::string(text) + "\""); };
    if (text.size() != 4 && text.size() != 7 && text.size() != 10) {
        throw fail();
    }
    if (!parse_int(text.substr(0, 4), date.year)) {
        throw fail();
    }
    if (text.size() >= 7) {
        int m = 0;
        if (text[4] != '-' || !parse_int(text.substr(5, 2), m)) {
            throw fail();
        }
        date.month = m;
    }
    if (text.size() == 10) {
        int d = 0;
        if (text[7] != '-' || !parse_int(text.substr(8, 2), d)) {
            throw fail();
        }
        date.day = d;
    }
    validate(date);
    return date;
}

std::string PartialDate::to_string() const {
    std::string s = pad(year, 4);
    if (month) {
        s += "-" + pad(*month, 2);
    }
    if (day) {
        s += "-" + pad(*day, 2);
    }
    return s;
}

SignedDuration compute_timespan(const PartialDate& citing, const PartialDate& cited) {
    const Precision p = std::min(citing.precision(), cited.precision());
    const PartialDate a = citing.truncated(p);
    const PartialDate b = cited.truncated(p);
    const bool negative = a < b;
    const PartialDate& later = negative ? b : a;
    const PartialDate& earlier = negative ? a : b;

    SignedDuration d;
    d.precision = p;
    switch (p) {
    case Precision::Year:
        d.years = later.year - earlier.year;
        break;
    case Precision::Month: {
        const int months = (later.year * 12 + *later.month) - (earlier.year * 12 + *earlier.month);
        d.years = months / 12;
        d.months = months % 12;
        break;
    }
    case Precision::Day:
        d = day_difference({later.year, *later.month, *later.day}, {earlier.year, *earlier.month, *earlier.day});
        break;
    }
    d.negative = negative && !d.is_zero();
    return d;
}

std::string format_duration(const SignedDuration& d) {
    std::string s = d.negative ? "-P" : "P";
    s += std::to_string(d.years) + "Y";
    if (d.precision >= Precision::Month) {
        s += std::to_string(d.months) + "M";
    }
    if (d.precision == Precision::Day) {
        s += std::to_string(d.days) + "D";
    }
    return s;
}

SignedDuration parse_duration(std::string_view text) {
    const auto fail = [&] {
        return Error(Errc::MalformedDuration, "not a duration: \"" + std::string(text) + "\"");
    };
    SignedDuration d;
    std::string_view rest = text;
    if (!rest.empty() && rest.front() == '-') {
        d.negative = true;
        rest.remove_prefix(1);
    }
    if (rest.empty() || rest.front() != 'P') {
        throw fail();
    }
    rest.remove_prefix(1);

    auto take = [&](char unit, int& out) {
        const auto pos = rest.find(unit);
        if (pos == std::string_view::npos || !parse_int(rest.substr(0, pos), out)) {
            return false;
        }
        rest.remove_prefix(pos + 1);
        return true;
    };
    if (!take('Y', d.years)) {
        throw fail();
    }
    d.precision = Precision::Year;
    if (!rest.empty()) {
        if (!take('M', d.months) || d.months > 11) {
            throw fail();
        }
        d.precision = Precision::Month;
    }
    if (!rest.empty()) {
        if (!take('D', d.days)) {
            throw fail();
        }
        d.precision = Precision::Day;
    }
    if (!rest.empty() || (d.negative && d.is_zero())) {
        throw fail();
    }
    // format_duration must reproduce the input byte for byte
    if (format_duration(d) != text) {
        throw fail();
    }
    return d;
}

std::string_view role_name(Role role) noexcept {
    switch (role) {
    case Role::Author: return "author";
    case Role::Editor: return "editor";
    case Role::Publisher: return "publisher";
    }
    return "author";
}

std::string_view discourse_kind_name(DiscourseKind kind) noexcept {
    switch (kind) {
    case DiscourseKind::Sentence: return "sentence";
    case DiscourseKind::Paragraph: return "paragraph";
    case DiscourseKind::Section: return "section";
    }
    return "sentence";
}

bool BibliographicResource::has_identifier(const Identifier& id) const {
    return std::find(identifiers.begin(), identifiers.end(), id) != identifiers.end();
}

std::optional<std::string> BibliographicResource::doi() const {
    for (const auto& id : identifiers) {
        if (id.scheme == IdScheme::Doi) {
            return id.value;
        }
    }
    return std::nullopt;
}

void validate(const Agent& agent) {
    if (agent.name.empty() && agent.identifiers.empty()) {
        throw Error(Errc::ParseError, "agent needs a name or an identifier");
    }
}

void validate(const BibliographicResource& resource) {
    if (resource.pub_date) {
        validate(*resource.pub_date);
    }
    std::set<Identifier> ids;
    for (const auto& id : resource.identifiers) {
        if (id.value.empty() || !ids.insert(id).second) {
            throw Error(Errc::ParseError, "empty or repeated identifier on " + resource.iri);
        }
    }
    std::set<std::pair<Role, int>> orders;
    for (const auto& r : resource.roles) {
        validate(r.agent);
        if (!orders.insert({r.role, r.order}).second) {
            throw Error(Errc::ParseError, "repeated byline position on " + resource.iri);
        }
    }
    for (const auto& ref : resource.references) {
        if (ref.resolved_target && *ref.resolved_target == resource.iri) {
            throw Error(Errc::ParseError, "reference resolves to its own containing resource");
        }
        for (const auto& p : ref.pointers) {
            if (p.marker_text.empty()) {
                throw Error(Errc::ParseError, "in-text pointer without marker text");
            }
        }
    }
    for (const auto& m : resource.manifestations) {
        if (m.format.empty()) {
            throw Error(Errc::ParseError, "manifestation without format");
        }
    }
    if (resource.venue_iri && *resource.venue_iri == resource.iri) {
        throw Error(Errc::ParseError, "resource contains itself");
    }
}

SelfCitation classify_self_citation(const BibliographicResource& citing, const BibliographicResource& cited) {
    auto orcids = [](const BibliographicResource& r) {
        std::set<std::string> out;
        for (const auto& role : r.roles) {
            if (role.role != Role::Author) {
                continue;
            }
            for (const auto& id : role.agent.identifiers) {
                if (id.scheme == IdScheme::Orcid) {
                    out.insert(id.value);
                }
            }
        }
        return out;
    };
    auto intersects = [](const std::set<std::string>& x, const std::set<std::string>& y) {
        return std::any_of(x.begin(), x.end(), [&](const std::string& v) { return y.count(v) != 0; });
    };
    const std::set<std::string> issn_a(citing.issns.begin(), citing.issns.end());
    const std::set<std::string> issn_b(cited.issns.begin(), cited.issns.end());
    return {intersects(orcids(citing), orcids(cited)), intersects(issn_a, issn_b)};
}

std::optional<OciSide> encodable_side(const SupplierRegistry& registry, const std::vector<Identifier>& ids) {
    for (const auto& id : ids) {
        const auto supplier = registry.for_scheme(id.scheme);
        if (!supplier) {
            continue;
        }
        try {
            encode_local(*supplier, id.value);
            return OciSide{*supplier, id.value};
        } catch (const Error&) {
        }
    }
    return std::nullopt;
}

Citation make_index_citation(const OciSide& citing, const OciSide& cited, std::optional<PartialDate> citing_date,
                             std::optional<PartialDate> cited_date) {
    Citation c;
    c.oci = build_oci(citing, cited);
    c.citing_id = citing.identifier();
    c.cited_id = cited.identifier();
    c.creation = citing_date;
    if (citing_date && cited_date) {
        c.timespan = compute_timespan(*citing_date, *cited_date);
    }
    return c;
}

Citation make_citation(const BibliographicResource& citing, const BibliographicResource& cited,
                       const SupplierRegistry& registry) {
    const auto citing_side = encodable_side(registry, citing.identifiers);
    if (!citing_side) {
        throw Error(Errc::NoEncodableIdentifier, "citing resource has no identifier under a registered supplier");
    }
    const auto cited_side = encodable_side(registry, cited.identifiers);
    if (!cited_side) {
        throw Error(Errc::NoEncodableIdentifier, "cited resource has no identifier under a registered supplier");
    }
    Citation c = make_index_citation(*citing_side, *cited_side, citing.pub_date, cited.pub_date);
    const auto sc = classify_self_citation(citing, cited);
    c.author_sc = sc.author;
    c.journal_sc = sc.journal;
    return c;
}

void canonicalize(BibliographicResource& r) {
    std::sort(r.identifiers.begin(), r.identifiers.end());
    r.identifiers.erase(std::unique(r.identifiers.begin(), r.identifiers.end()), r.identifiers.end());
    std::sort(r.issns.begin(), r.issns.end());
    r.issns.erase(std::unique(r.issns.begin(), r.issns.end()), r.issns.end());
    for (auto& role : r.roles) {
        std::sort(role.agent.identifiers.begin(), role.agent.identifiers.end());
    }
    std::sort(r.roles.begin(), r.roles.end(), [](const RoleInTime& x, const RoleInTime& y) {
        return std::tie(x.role, x.order, x.iri) < std::tie(y.role, y.order, y.iri);
    });
    for (auto& ref : r.references) {
        std::sort(ref.pointers.begin(), ref.pointers.end(),
                  [](const auto& x, const auto& y) { return x.iri < y.iri; });
    }
    std::sort(r.references.begin(), r.references.end(),
              [](const auto& x, const auto& y) { return x.iri < y.iri; });
    std::sort(r.manifestations.begin(), r.manifestations.end(),
              [](const auto& x, const auto& y) { return x.iri < y.iri; });
}

BibliographicResource merge_resources(const BibliographicResource& a, const BibliographicResource& b) {
    const bool shared = std::any_of(a.identifiers.begin(), a.identifiers.end(),
                                    [&](const Identifier& id) { return b.has_identifier(id); });
    if (!shared) {
        throw Error(Errc::NoSharedIdentifier, "resources share no identifier");
    }
    BibliographicResource out;
    out.iri = min_nonempty(a.iri, b.iri);
    out.identifiers = a.identifiers;
    sorted_union(out.identifiers, b.identifiers);

    if (a.title.size() != b.title.size()) {
        out.title = a.title.size() > b.title.size() ? a.title : b.title;
    } else {
        out.title = std::min(a.title, b.title);
    }

    if (a.pub_date && b.pub_date) {
        const auto pa = a.pub_date->precision();
        const auto pb = b.pub_date->precision();
        out.pub_date = pa != pb ? (pa > pb ? a.pub_date : b.pub_date) : std::min(a.pub_date, b.pub_date);
    } else {
        out.pub_date = a.pub_date ? a.pub_date : b.pub_date;
    }

    if (a.venue_iri && b.venue_iri) {
        out.venue_iri = std::min(*a.venue_iri, *b.venue_iri);
    } else {
        out.venue_iri = a.venue_iri ? a.venue_iri : b.venue_iri;
    }
    out.issns = a.issns;
    sorted_union(out.issns, b.issns);

    out.roles = merge_roles(a.roles, b.roles);
    out.references = merge_by_key(a.references, b.references,
                                  [](const BibliographicReference& r) { return std::make_pair(r.raw_text, r.resolved_target); });
    out.manifestations = merge_by_key(a.manifestations, b.manifestations,
                                      [](const Manifestation& m) { return std::make_pair(m.format, m.pages); });
    canonicalize(out);
    return out;
}

} // namespace ocindex
