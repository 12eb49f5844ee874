#include "ocindex/vocab.hpp"

#include <array>
#include <utility>

namespace ocindex::vocab {

std::string expand_curie(std::string_view text) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 18> kPrefixes{{
        {"rdf", kRdf},         {"xsd", kXsd},       {"cito", kCito},     {"fabio", kFabio},
        {"biro", kBiro},       {"c4o", kC4o},       {"deo", kDeo},       {"doco", kDoco},
        {"pro", kPro},         {"datacite", kDatacite}, {"literal", kLiteral}, {"frbr", kFrbr},
        {"prism", kPrism},     {"dcterms", kDcterms}, {"foaf", kFoaf},   {"oa", kOa},
        {"prov", kProv},       {"oco", kOco},
    }};
    const auto colon = text.find(':');
    if (colon == std::string_view::npos || text.substr(colon + 1, 2) == "//") {
        return std::string(text);
    }
    const auto head = text.substr(0, colon);
    for (const auto& [prefix, ns] : kPrefixes) {
        if (prefix == head) {
            return iri(ns, text.substr(colon + 1));
        }
    }
    return std::string(text);
}

} // namespace ocindex::vocab
