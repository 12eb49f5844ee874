#include "ocindex/mapping.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>

#include "ocindex/error.hpp"
#include "ocindex/vocab.hpp"

namespace ocindex {

namespace {

constexpr std::string_view kDoiBase = "https://doi.org/";
constexpr std::string_view kOccBase = "https://w3id.org/oc/corpus/br/";
constexpr std::string_view kOrcidBase = "https://orcid.org/";
constexpr std::string_view kIssnBase = "urn:issn:";
constexpr std::string_view kPmidBase = "https://pubmed.ncbi.nlm.nih.gov/";

std::string citation_base() { return vocab::iri(vocab::kBase, "ci/"); }
std::string other_base() { return vocab::iri(vocab::kBase, "other/"); }

bool iri_safe(unsigned char c) {
    if (std::isalnum(c) != 0 && c < 0x80) {
        return true;
    }
    return std::string_view("-._~/:@!$&'()*+,;=").find(static_cast<char>(c)) != std::string_view::npos;
}

Quad q3(const std::string& s, const std::string& p, Term o) {
    return Quad{Term::iri(s), Term::iri(p), std::move(o), std::nullopt};
}

Quad link(const std::string& s, const std::string& p, const std::string& o) {
    return q3(s, p, Term::iri(o));
}

void add_identifiers(std::vector<Quad>& out, const std::string& owner, const std::vector<Identifier>& ids) {
    for (const auto& id : ids) {
        const std::string idi = identifier_entity_iri(owner, id);
        out.push_back(link(owner, vocab::kHasIdentifier, idi));
        out.push_back(link(idi, vocab::kType, vocab::kIdentifier));
        out.push_back(link(idi, vocab::kUsesScheme, vocab::iri(vocab::kDatacite, scheme_name(id.scheme))));
        out.push_back(q3(idi, vocab::kHasLiteralValue, Term::literal(id.value)));
    }
}

std::vector<Quad> subject_quads(const StoreReader& reader, std::string_view s) {
    QuadPattern p;
    p.subject = Term::iri(std::string(s));
    p.default_graph = true;
    return reader.match(p);
}

std::vector<Term> objects(const std::vector<Quad>& quads, const std::string& predicate) {
    std::vector<Term> out;
    for (const auto& q : quads) {
        if (q.predicate.value == predicate) {
            out.push_back(q.object);
        }
    }
    return out;
}

std::optional<Term> object(const std::vector<Quad>& quads, const std::string& predicate) {
    for (const auto& q : quads) {
        if (q.predicate.value == predicate) {
            return q.object;
        }
    }
    return std::nullopt;
}

bool has_type(const std::vector<Quad>& quads, const std::string& type) {
    return std::any_of(quads.begin(), quads.end(), [&](const Quad& q) {
        return q.predicate.value == vocab::kType && q.object.is_iri() && q.object.value == type;
    });
}

std::vector<std::string> subjects_pointing(const StoreReader& reader, const std::string& predicate,
                                           const std::string& object) {
    QuadPattern p;
    p.predicate = Term::iri(predicate);
    p.object = Term::iri(object);
    p.default_graph = true;
    std::vector<std::string> out;
    for (const auto& q : reader.match(p)) {
        out.push_back(q.subject.value);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Identifier> load_identifiers(const StoreReader& reader, const std::vector<Quad>& owner_quads) {
    std::vector<Identifier> ids;
    for (const auto& t : objects(owner_quads, vocab::kHasIdentifier)) {
        const auto quads = subject_quads(reader, t.value);
        const auto scheme_iri = object(quads, vocab::kUsesScheme);
        const auto value = object(quads, vocab::kHasLiteralValue);
        if (!scheme_iri || !value) {
            continue;
        }
        const std::string_view name = std::string_view(scheme_iri->value).substr(vocab::kDatacite.size());
        ids.push_back({scheme_from_name(name).value_or(IdScheme::Other), value->value});
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

int parse_position(const Term& t) {
    int v = 0;
    std::from_chars(t.value.data(), t.value.data() + t.value.size(), v);
    return v;
}

Role role_from_iri(std::string_view iri) {
    const auto local = iri.substr(vocab::kPro.size());
    if (local == "editor") {
        return Role::Editor;
    }
    if (local == "publisher") {
        return Role::Publisher;
    }
    return Role::Author;
}

DiscourseKind kind_from_iri(std::string_view iri) {
    const auto local = iri.substr(vocab::kDoco.size());
    if (local == "Paragraph") {
        return DiscourseKind::Paragraph;
    }
    if (local == "Section") {
        return DiscourseKind::Section;
    }
    return DiscourseKind::Sentence;
}

std::string kind_iri(DiscourseKind kind) {
    switch (kind) {
    case DiscourseKind::Sentence: return vocab::iri(vocab::kDoco, "Sentence");
    case DiscourseKind::Paragraph: return vocab::iri(vocab::kDoco, "Paragraph");
    case DiscourseKind::Section: return vocab::iri(vocab::kDoco, "Section");
    }
    return {};
}

} // namespace

std::string iri_escape(std::string_view text) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (iri_safe(c)) {
            out.push_back(ch);
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

std::string iri_unescape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size()) {
            unsigned v = 0;
            const auto [ptr, ec] = std::from_chars(text.data() + i + 1, text.data() + i + 3, v, 16);
            if (ec == std::errc() && ptr == text.data() + i + 3) {
                out.push_back(static_cast<char>(v));
                i += 2;
                continue;
            }
        }
        out.push_back(text[i]);
    }
    return out;
}

std::string identified_iri(const Identifier& id) {
    switch (id.scheme) {
    case IdScheme::Doi: return std::string(kDoiBase) + iri_escape(id.value);
    case IdScheme::Occ: return std::string(kOccBase) + id.value;
    case IdScheme::Orcid: return std::string(kOrcidBase) + id.value;
    case IdScheme::Issn: return std::string(kIssnBase) + id.value;
    case IdScheme::Pmid: return std::string(kPmidBase) + id.value;
    case IdScheme::Oci: {
        std::string_view v = id.value;
        if (v.substr(0, 4) == "oci:") {
            v.remove_prefix(4);
        }
        return citation_base() + std::string(v);
    }
    case IdScheme::Other: return other_base() + iri_escape(id.value);
    }
    return {};
}

std::optional<Identifier> identifier_from_iri(std::string_view iri) {
    auto strip = [&](std::string_view base) -> std::optional<std::string> {
        if (iri.substr(0, base.size()) == base && iri.size() > base.size()) {
            return iri_unescape(iri.substr(base.size()));
        }
        return std::nullopt;
    };
    if (auto v = strip(kDoiBase)) return Identifier{IdScheme::Doi, *v};
    if (auto v = strip(kOccBase)) return Identifier{IdScheme::Occ, *v};
    if (auto v = strip(kOrcidBase)) return Identifier{IdScheme::Orcid, *v};
    if (auto v = strip(kIssnBase)) return Identifier{IdScheme::Issn, *v};
    if (auto v = strip(kPmidBase)) return Identifier{IdScheme::Pmid, *v};
    if (auto v = strip(citation_base())) return Identifier{IdScheme::Oci, "oci:" + *v};
    if (auto v = strip(other_base())) return Identifier{IdScheme::Other, *v};
    return std::nullopt;
}

std::string citation_iri(const Oci& oci) {
    return citation_base() + std::string(oci.numerals());
}

std::optional<std::string> oci_numerals_from_iri(std::string_view iri) {
    const std::string base = citation_base();
    if (iri.substr(0, base.size()) != base) {
        return std::nullopt;
    }
    return std::string(iri.substr(base.size()));
}

std::string identifier_entity_iri(std::string_view owner, const Identifier& id) {
    std::string s(owner);
    s += "/id/";
    s += scheme_name(id.scheme);
    s += '/';
    s += iri_escape(id.value);
    return s;
}

Term date_literal(const PartialDate& date) {
    switch (date.precision()) {
    case Precision::Day: return Term::literal(date.to_string(), vocab::kXsdDate);
    case Precision::Month: return Term::literal(date.to_string(), vocab::kXsdGYearMonth);
    case Precision::Year: return Term::literal(date.to_string(), vocab::kXsdGYear);
    }
    return {};
}

std::vector<Quad> entity_to_quads(const Agent& agent) {
    std::vector<Quad> out;
    out.push_back(link(agent.iri, vocab::kType, vocab::kAgent));
    if (!agent.name.empty()) {
        out.push_back(q3(agent.iri, vocab::kName, Term::literal(agent.name)));
    }
    add_identifiers(out, agent.iri, agent.identifiers);
    return out;
}

std::vector<Quad> entity_to_quads(const DiscourseElement& element) {
    return {
        link(element.iri, vocab::kType, vocab::kDiscourseElement),
        link(element.iri, vocab::kType, kind_iri(element.kind)),
        q3(element.iri, vocab::kHasContent, Term::literal(element.text)),
    };
}

std::vector<Quad> entity_to_quads(const BibliographicResource& r) {
    std::vector<Quad> out;
    out.push_back(link(r.iri, vocab::kType, vocab::kExpression));
    add_identifiers(out, r.iri, r.identifiers);
    if (!r.title.empty()) {
        out.push_back(q3(r.iri, vocab::kTitle, Term::literal(r.title)));
    }
    if (r.pub_date) {
        out.push_back(q3(r.iri, vocab::kPublicationDate, date_literal(*r.pub_date)));
    }
    if (r.venue_iri) {
        out.push_back(link(r.iri, vocab::kPartOf, *r.venue_iri));
    }
    for (const auto& role : r.roles) {
        out.push_back(link(r.iri, vocab::kDocumentContextFor, role.iri));
        out.push_back(link(role.iri, vocab::kType, vocab::kRoleInTime));
        out.push_back(link(role.iri, vocab::kWithRole, vocab::iri(vocab::kPro, role_name(role.role))));
        out.push_back(link(role.iri, vocab::kIsHeldBy, role.agent.iri));
        out.push_back(q3(role.iri, vocab::kHasPosition, Term::literal(std::to_string(role.order), vocab::kXsdInteger)));
        auto agent = entity_to_quads(role.agent);
        out.insert(out.end(), agent.begin(), agent.end());
    }
    for (const auto& ref : r.references) {
        out.push_back(link(r.iri, vocab::kPart, ref.iri));
        out.push_back(link(ref.iri, vocab::kType, vocab::kBibReference));
        out.push_back(q3(ref.iri, vocab::kHasContent, Term::literal(ref.raw_text)));
        if (ref.resolved_target) {
            out.push_back(link(ref.iri, vocab::kReferences, *ref.resolved_target));
        }
        for (const auto& p : ref.pointers) {
            out.push_back(link(p.iri, vocab::kType, vocab::kInTextPointer));
            out.push_back(q3(p.iri, vocab::kHasContent, Term::literal(p.marker_text)));
            out.push_back(link(p.iri, vocab::kDenotes, ref.iri));
            out.push_back(link(p.iri, vocab::kPartOf, p.context_iri));
            if (p.annotation) {
                const auto& a = *p.annotation;
                out.push_back(link(a.iri, vocab::kType, vocab::kAnnotation));
                out.push_back(link(a.iri, vocab::kHasTarget, p.iri));
                out.push_back(link(a.iri, vocab::kHasBody, a.citation_iri));
                if (a.function) {
                    out.push_back(q3(a.iri, vocab::kDescription, Term::literal(*a.function)));
                }
            }
        }
    }
    for (const auto& m : r.manifestations) {
        out.push_back(link(r.iri, vocab::kEmbodiment, m.iri));
        out.push_back(link(m.iri, vocab::kType, vocab::kManifestation));
        out.push_back(q3(m.iri, vocab::kFormat, Term::literal(m.format)));
        if (m.pages) {
            out.push_back(q3(m.iri, vocab::kPageRange, Term::literal(*m.pages)));
        }
    }
    return out;
}

std::vector<Quad> entity_to_quads(const Citation& c) {
    const std::string ci = citation_iri(c.oci);
    const std::string citing = identified_iri(c.citing_id);
    const std::string cited = identified_iri(c.cited_id);
    std::vector<Quad> out;
    out.push_back(link(ci, vocab::kType, vocab::kCitation));
    out.push_back(link(ci, vocab::kHasCitingEntity, citing));
    out.push_back(link(ci, vocab::kHasCitedEntity, cited));
    if (c.creation) {
        out.push_back(q3(ci, vocab::kHasCreationDate, date_literal(*c.creation)));
    }
    if (c.timespan) {
        out.push_back(q3(ci, vocab::kHasTimeSpan, Term::literal(format_duration(*c.timespan), vocab::kXsdDuration)));
    }
    if (c.author_sc) {
        out.push_back(link(ci, vocab::kType, vocab::kAuthorSelfCitation));
    }
    if (c.journal_sc) {
        out.push_back(link(ci, vocab::kType, vocab::kJournalSelfCitation));
    }
    out.push_back(link(citing, vocab::kCites, cited));
    return out;
}

std::optional<Agent> load_agent(const StoreReader& reader, std::string_view iri) {
    const auto quads = subject_quads(reader, iri);
    if (!has_type(quads, vocab::kAgent)) {
        return std::nullopt;
    }
    Agent a;
    a.iri = std::string(iri);
    if (const auto name = object(quads, vocab::kName)) {
        a.name = name->value;
    }
    a.identifiers = load_identifiers(reader, quads);
    return a;
}

std::optional<DiscourseElement> load_discourse_element(const StoreReader& reader, std::string_view iri) {
    const auto quads = subject_quads(reader, iri);
    if (!has_type(quads, vocab::kDiscourseElement)) {
        return std::nullopt;
    }
    DiscourseElement e;
    e.iri = std::string(iri);
    for (const auto& t : objects(quads, vocab::kType)) {
        if (t.value.rfind(vocab::kDoco, 0) == 0) {
            e.kind = kind_from_iri(t.value);
        }
    }
    if (const auto text = object(quads, vocab::kHasContent)) {
        e.text = text->value;
    }
    return e;
}

std::optional<BibliographicResource> load_resource(const StoreReader& reader, std::string_view iri) {
    const auto quads = subject_quads(reader, iri);
    if (!has_type(quads, vocab::kExpression)) {
        return std::nullopt;
    }
    BibliographicResource r;
    r.iri = std::string(iri);
    r.identifiers = load_identifiers(reader, quads);
    if (const auto t = object(quads, vocab::kTitle)) {
        r.title = t->value;
    }
    if (const auto d = object(quads, vocab::kPublicationDate)) {
        r.pub_date = PartialDate::parse(d->value);
    }
    if (const auto v = object(quads, vocab::kPartOf)) {
        r.venue_iri = v->value;
        for (const auto& q : subject_quads(reader, v->value)) {
            if (q.predicate.value != vocab::kHasIdentifier) {
                continue;
            }
            const auto idq = subject_quads(reader, q.object.value);
            const auto scheme = object(idq, vocab::kUsesScheme);
            const auto value = object(idq, vocab::kHasLiteralValue);
            if (scheme && value && scheme->value == vocab::iri(vocab::kDatacite, "issn")) {
                r.issns.push_back(value->value);
            }
        }
    }
    for (const auto& role_iri : objects(quads, vocab::kDocumentContextFor)) {
        const auto rq = subject_quads(reader, role_iri.value);
        RoleInTime role;
        role.iri = role_iri.value;
        if (const auto w = object(rq, vocab::kWithRole)) {
            role.role = role_from_iri(w->value);
        }
        if (const auto pos = object(rq, vocab::kHasPosition)) {
            role.order = parse_position(*pos);
        }
        if (const auto held = object(rq, vocab::kIsHeldBy)) {
            if (auto agent = load_agent(reader, held->value)) {
                role.agent = std::move(*agent);
            }
        }
        r.roles.push_back(std::move(role));
    }
    for (const auto& ref_iri : objects(quads, vocab::kPart)) {
        const auto bq = subject_quads(reader, ref_iri.value);
        if (!has_type(bq, vocab::kBibReference)) {
            continue;
        }
        BibliographicReference ref;
        ref.iri = ref_iri.value;
        if (const auto c = object(bq, vocab::kHasContent)) {
            ref.raw_text = c->value;
        }
        if (const auto t = object(bq, vocab::kReferences)) {
            ref.resolved_target = t->value;
        }
        for (const auto& p_iri : subjects_pointing(reader, vocab::kDenotes, ref.iri)) {
            const auto pq = subject_quads(reader, p_iri);
            InTextReferencePointer p;
            p.iri = p_iri;
            if (const auto m = object(pq, vocab::kHasContent)) {
                p.marker_text = m->value;
            }
            if (const auto ctx = object(pq, vocab::kPartOf)) {
                p.context_iri = ctx->value;
            }
            for (const auto& a_iri : subjects_pointing(reader, vocab::kHasTarget, p_iri)) {
                const auto aq = subject_quads(reader, a_iri);
                Annotation a;
                a.iri = a_iri;
                if (const auto body = object(aq, vocab::kHasBody)) {
                    a.citation_iri = body->value;
                }
                if (const auto fn = object(aq, vocab::kDescription)) {
                    a.function = fn->value;
                }
                p.annotation = std::move(a);
            }
            ref.pointers.push_back(std::move(p));
        }
        r.references.push_back(std::move(ref));
    }
    for (const auto& m_iri : objects(quads, vocab::kEmbodiment)) {
        const auto mq = subject_quads(reader, m_iri.value);
        Manifestation m;
        m.iri = m_iri.value;
        if (const auto f = object(mq, vocab::kFormat)) {
            m.format = f->value;
        }
        if (const auto p = object(mq, vocab::kPageRange)) {
            m.pages = p->value;
        }
        r.manifestations.push_back(std::move(m));
    }
    canonicalize(r);
    return r;
}

std::optional<Citation> load_citation(const StoreReader& reader, const SupplierRegistry& registry,
                                      std::string_view iri) {
    const auto numerals = oci_numerals_from_iri(iri);
    if (!numerals) {
        return std::nullopt;
    }
    const auto quads = subject_quads(reader, iri);
    if (!has_type(quads, vocab::kCitation)) {
        return std::nullopt;
    }
    Citation c;
    c.oci = parse_oci(registry, *numerals);
    c.citing_id = c.oci.citing.identifier();
    c.cited_id = c.oci.cited.identifier();
    if (const auto d = object(quads, vocab::kHasCreationDate)) {
        c.creation = PartialDate::parse(d->value);
    }
    if (const auto t = object(quads, vocab::kHasTimeSpan)) {
        c.timespan = parse_duration(t->value);
    }
    c.author_sc = has_type(quads, vocab::kAuthorSelfCitation);
    c.journal_sc = has_type(quads, vocab::kJournalSelfCitation);
    return c;
}

bool owned_by(std::string_view entity, std::string_view subject) {
    return subject.substr(0, entity.size()) == entity &&
           (subject.size() == entity.size() || subject[entity.size()] == '/');
}

std::vector<Quad> entity_closure(const StoreReader& reader, std::string_view entity) {
    std::vector<Quad> out;
    std::set<std::string> seen{std::string(entity)};
    std::deque<std::string> todo{std::string(entity)};
    while (!todo.empty()) {
        const std::string node = std::move(todo.front());
        todo.pop_front();
        for (auto& q : subject_quads(reader, node)) {
            if (q.object.is_iri() && owned_by(entity, q.object.value) && seen.insert(q.object.value).second) {
                todo.push_back(q.object.value);
            }
            out.push_back(std::move(q));
        }
        QuadPattern incoming;
        incoming.object = Term::iri(node);
        incoming.default_graph = true;
        for (const auto& q : reader.match(incoming)) {
            if (q.subject.is_iri() && owned_by(entity, q.subject.value) && seen.insert(q.subject.value).second) {
                todo.push_back(q.subject.value);
            }
        }
    }
    return out;
}

} // namespace ocindex
