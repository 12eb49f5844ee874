#include "ocindex/identifier.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace ocindex {

namespace {

constexpr std::array<std::pair<IdScheme, std::string_view>, 7> kSchemeNames{{
    {IdScheme::Doi, "doi"},
    {IdScheme::Occ, "occ"},
    {IdScheme::Orcid, "orcid"},
    {IdScheme::Issn, "issn"},
    {IdScheme::Pmid, "pmid"},
    {IdScheme::Oci, "oci"},
    {IdScheme::Other, "other"},
}};

bool starts_with_ci(std::string_view text, std::string_view head) {
    if (text.size() < head.size()) {
        return false;
    }
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) != head[i]) {
            return false;
        }
    }
    return true;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

} // namespace

std::string_view scheme_name(IdScheme scheme) noexcept {
    for (const auto& [s, name] : kSchemeNames) {
        if (s == scheme) {
            return name;
        }
    }
    return "other";
}

std::optional<IdScheme> scheme_from_name(std::string_view name) noexcept {
    for (const auto& [s, n] : kSchemeNames) {
        if (n == name) {
            return s;
        }
    }
    return std::nullopt;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::optional<std::string> normalize_doi(std::string_view text) {
    std::string s = trim(text);
    std::string_view v = s;
    for (std::string_view head : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                                  "http://dx.doi.org/", "doi:"}) {
        if (starts_with_ci(v, head)) {
            v.remove_prefix(head.size());
            break;
        }
    }
    std::string doi = to_lower(trim(v));
    if (doi.rfind("10.", 0) != 0) {
        return std::nullopt;
    }
    const auto slash = doi.find('/');
    if (slash == std::string::npos || slash == 3 || slash + 1 == doi.size()) {
        return std::nullopt;
    }
    for (std::size_t i = 3; i < slash; ++i) {
        const char c = doi[i];
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.')) {
            return std::nullopt;
        }
    }
    if (std::any_of(doi.begin(), doi.end(), [](unsigned char c) { return std::isspace(c) != 0; })) {
        return std::nullopt;
    }
    return doi;
}

std::optional<std::string> normalize_orcid(std::string_view text) {
    std::string s = trim(text);
    std::string_view v = s;
    for (std::string_view head : {"https://orcid.org/", "http://orcid.org/", "orcid:"}) {
        if (starts_with_ci(v, head)) {
            v.remove_prefix(head.size());
            break;
        }
    }
    if (v.size() != 19) {
        return std::nullopt;
    }
    std::string out(v);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const bool dash_pos = i == 4 || i == 9 || i == 14;
        if (dash_pos) {
            if (out[i] != '-') {
                return std::nullopt;
            }
        } else if (i == 18 && (out[i] == 'x' || out[i] == 'X')) {
            out[i] = 'X';
        } else if (!std::isdigit(static_cast<unsigned char>(out[i]))) {
            return std::nullopt;
        }
    }
    return out;
}

std::optional<std::string> normalize_issn(std::string_view text) {
    std::string s = trim(text);
    if (s.size() == 8) {
        s.insert(4, "-");
    }
    if (s.size() != 9 || s[4] != '-') {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == 4) {
            continue;
        }
        if (i == 8 && (s[i] == 'x' || s[i] == 'X')) {
            s[i] = 'X';
        } else if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return std::nullopt;
        }
    }
    return s;
}

std::optional<Identifier> make_identifier(IdScheme scheme, std::string_view value) {
    std::optional<std::string> v;
    switch (scheme) {
    case IdScheme::Doi: v = normalize_doi(value); break;
    case IdScheme::Orcid: v = normalize_orcid(value); break;
    case IdScheme::Issn: v = normalize_issn(value); break;
    case IdScheme::Occ:
    case IdScheme::Pmid: {
        std::string t = trim(value);
        if (all_digits(t) && t[0] != '0') {
            v = std::move(t);
        }
        break;
    }
    case IdScheme::Oci:
    case IdScheme::Other: {
        std::string t = trim(value);
        if (!t.empty()) {
            v = std::move(t);
        }
        break;
    }
    }
    if (!v) {
        return std::nullopt;
    }
    return Identifier{scheme, std::move(*v)};
}

std::string render_identifier(const Identifier& id) {
    if (id.scheme == IdScheme::Doi) {
        return id.value;
    }
    return std::string(scheme_name(id.scheme)) + ":" + id.value;
}

std::optional<Identifier> parse_identifier(std::string_view text) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    if (colon != std::string::npos) {
        const std::string head = to_lower(std::string_view(t).substr(0, colon));
        if (auto scheme = scheme_from_name(head)) {
            if (*scheme == IdScheme::Oci) {
                // the scheme is part of the canonical OCI text
                return make_identifier(*scheme, t);
            }
            return make_identifier(*scheme, std::string_view(t).substr(colon + 1));
        }
    }
    return make_identifier(IdScheme::Doi, t);
}

} // namespace ocindex
