#ifndef OCINDEX_MODEL_HPP
#define OCINDEX_MODEL_HPP

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocindex/identifier.hpp"
#include "ocindex/oci.hpp"

namespace ocindex {

enum class Precision { Year = 0, Month = 1, Day = 2 };

/// Publication date known to year, month or day.
struct PartialDate {
    int year = 0;
    std::optional<int> month;
    std::optional<int> day;

    Precision precision() const noexcept {
        return day ? Precision::Day : month ? Precision::Month : Precision::Year;
    }
    PartialDate truncated(Precision p) const;

    /// Parses "YYYY", "YYYY-MM" or "YYYY-MM-DD"; throws InvalidDate.
    static PartialDate parse(std::string_view text);
    std::string to_string() const;

    auto operator<=>(const PartialDate&) const = default;
};

/// Throws InvalidDate unless the fields form a real calendar date.
void validate(const PartialDate& date);

struct SignedDuration {
    bool negative = false;
    int years = 0;
    int months = 0;
    int days = 0;
    Precision precision = Precision::Year;

    bool is_zero() const noexcept { return years == 0 && months == 0 && days == 0; }
    SignedDuration negated() const noexcept {
        SignedDuration d = *this;
        d.negative = !is_zero() && !negative;
        return d;
    }
    bool operator==(const SignedDuration&) const = default;
};

/// Calendar difference citing - cited, at the coarser of the two precisions.
SignedDuration compute_timespan(const PartialDate& citing, const PartialDate& cited);

std::string format_duration(const SignedDuration& d);
SignedDuration parse_duration(std::string_view text);

// ---------------------------------------------------------------------------
// Entity inventory. Every entity carries its IRI; nested entities use IRIs
// minted under their owner's IRI.

struct Agent {
    std::string iri;
    std::string name;
    std::vector<Identifier> identifiers;

    bool operator==(const Agent&) const = default;
};

enum class Role { Author, Editor, Publisher };
std::string_view role_name(Role role) noexcept;

struct RoleInTime {
    std::string iri;
    Agent agent;
    Role role = Role::Author;
    int order = 1;

    bool operator==(const RoleInTime&) const = default;
};

struct Manifestation {
    std::string iri;
    std::string format;
    std::optional<std::string> pages;

    bool operator==(const Manifestation&) const = default;
};

enum class DiscourseKind { Sentence, Paragraph, Section };
std::string_view discourse_kind_name(DiscourseKind kind) noexcept;

struct DiscourseElement {
    std::string iri;
    DiscourseKind kind = DiscourseKind::Sentence;
    std::string text;

    bool operator==(const DiscourseElement&) const = default;
};

/// Links the pointer that holds it to the citation it realises.
struct Annotation {
    std::string iri;
    std::string citation_iri;
    std::optional<std::string> function;

    bool operator==(const Annotation&) const = default;
};

struct InTextReferencePointer {
    std::string iri;
    std::string marker_text;
    std::string context_iri; ///< DiscourseElement holding the marker
    std::optional<Annotation> annotation;

    bool operator==(const InTextReferencePointer&) const = default;
};

struct BibliographicReference {
    std::string iri;
    std::string raw_text;
    std::optional<std::string> resolved_target;
    std::vector<InTextReferencePointer> pointers;

    bool operator==(const BibliographicReference&) const = default;
};

struct BibliographicResource {
    std::string iri;
    std::vector<Identifier> identifiers;
    std::string title;
    std::optional<PartialDate> pub_date;
    std::optional<std::string> venue_iri;
    std::vector<std::string> issns; ///< inherited from the venue
    std::vector<RoleInTime> roles;
    std::vector<BibliographicReference> references;
    std::vector<Manifestation> manifestations;

    bool has_identifier(const Identifier& id) const;
    std::optional<std::string> doi() const;
    bool operator==(const BibliographicResource&) const = default;
};

struct Citation {
    Oci oci;
    Identifier citing_id;
    Identifier cited_id;
    std::optional<PartialDate> creation;
    std::optional<SignedDuration> timespan;
    bool journal_sc = false;
    bool author_sc = false;

    bool operator==(const Citation&) const = default;
};

/// Throws the matching Errc (InvalidDate, ParseError) on invariant violations.
void validate(const Agent& agent);
void validate(const BibliographicResource& resource);

struct SelfCitation {
    bool author = false;
    bool journal = false;
};

/// ORCID overlap among authors, ISSN overlap among venues. Never guesses.
SelfCitation classify_self_citation(const BibliographicResource& citing, const BibliographicResource& cited);

/// Picks, for each side, the first identifier some registered supplier can encode.
std::optional<OciSide> encodable_side(const SupplierRegistry& registry, const std::vector<Identifier>& ids);

Citation make_citation(const BibliographicResource& citing, const BibliographicResource& cited,
                       const SupplierRegistry& registry);

/// Citation between bare identifiers, for index data without resource metadata.
Citation make_index_citation(const OciSide& citing, const OciSide& cited, std::optional<PartialDate> citing_date,
                             std::optional<PartialDate> cited_date);

/// Order-independent union of two descriptions of the same work.
BibliographicResource merge_resources(const BibliographicResource& a, const BibliographicResource& b);

/// Sorts and deduplicates the list-valued fields, so equal content compares equal.
void canonicalize(BibliographicResource& resource);

} // namespace ocindex

#endif // OCINDEX_MODEL_HPP
