#include "ocindex/oci.hpp"

#include <algorithm>
#include <mutex>

#include "ocindex/error.hpp"

namespace ocindex {

namespace {

// Codes 37..62, in order.
constexpr std::string_view kSymbols = "._:;()#+%&?=*,@~$!'\"[]{}|^";

bool is_digits(std::string_view s) noexcept {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string decode_paired(std::string_view body) {
    if (body.size() % 2 != 0) {
        throw Error(Errc::OddLengthBody, "paired-table body has odd length " + std::to_string(body.size()));
    }
    if (body.empty()) {
        throw Error(Errc::OddLengthBody, "paired-table body is empty");
    }
    const auto& table = NumeralTable::standard();
    std::string out = "10.";
    out.reserve(3 + body.size() / 2);
    for (std::size_t i = 0; i < body.size(); i += 2) {
        const auto c = table.char_of(body.substr(i, 2));
        if (!c) {
            throw Error(Errc::UnknownCode, "no character for code \"" + std::string(body.substr(i, 2)) + "\"");
        }
        out.push_back(*c);
    }
    return out;
}

} // namespace

NumeralTable::NumeralTable() {
    chars_.fill('\0');
    for (auto& c : codes_) {
        c = {'\0', '\0'};
    }
    auto put = [this](char c, int code) {
        codes_[static_cast<unsigned char>(c)] = {static_cast<char>('0' + code / 10), static_cast<char>('0' + code % 10)};
        chars_[static_cast<std::size_t>(code)] = c;
    };
    for (int d = 0; d < 10; ++d) {
        put(static_cast<char>('0' + d), d);
    }
    for (int l = 0; l < 26; ++l) {
        put(static_cast<char>('a' + l), 10 + l);
    }
    put('/', 36);
    for (std::size_t i = 0; i < kSymbols.size(); ++i) {
        put(kSymbols[i], 37 + static_cast<int>(i));
    }
    put('-', 63);
    for (char c : chars_) {
        if (c != '\0') {
            alphabet_.push_back(c);
        }
    }
}

const NumeralTable& NumeralTable::standard() {
    static const NumeralTable table;
    return table;
}

std::optional<std::string_view> NumeralTable::code_of(char c) const noexcept {
    const auto& code = codes_[static_cast<unsigned char>(c)];
    if (code[0] == '\0') {
        return std::nullopt;
    }
    return std::string_view(code.data(), 2);
}

std::optional<char> NumeralTable::char_of(std::string_view code) const noexcept {
    if (code.size() != 2 || !is_digits(code)) {
        return std::nullopt;
    }
    const char c = chars_[static_cast<std::size_t>((code[0] - '0') * 10 + (code[1] - '0'))];
    if (c == '\0') {
        return std::nullopt;
    }
    return c;
}

std::string_view codec_kind_name(CodecKind kind) noexcept {
    return kind == CodecKind::PairedTable ? "paired" : "verbatim";
}

std::optional<CodecKind> codec_kind_from_name(std::string_view name) noexcept {
    if (name == "paired" || name == "PairedTable") {
        return CodecKind::PairedTable;
    }
    if (name == "verbatim" || name == "VerbatimNumeric") {
        return CodecKind::VerbatimNumeric;
    }
    return std::nullopt;
}

bool is_well_formed_prefix(std::string_view prefix) noexcept {
    // '0' ([1-9][0-9]*'0')+ : the [0-9]* absorbs any inner zeros, so the
    // pattern reduces to these four checks.
    return prefix.size() >= 3 && is_digits(prefix) && prefix.front() == '0' && prefix[1] != '0' &&
           prefix.back() == '0';
}

SupplierRegistry::SupplierRegistry() {
    entries_.push_back({"020", "crossref", CodecKind::PairedTable, IdScheme::Doi});
    entries_.push_back({"030", "occ", CodecKind::VerbatimNumeric, IdScheme::Occ});
}

SupplierRegistry::SupplierRegistry(const SupplierRegistry& other) {
    std::shared_lock lock(other.mutex_);
    entries_ = other.entries_;
}

SupplierRegistry& SupplierRegistry::operator=(const SupplierRegistry& other) {
    if (this != &other) {
        std::vector<SupplierEntry> copy = other.entries();
        std::unique_lock lock(mutex_);
        entries_ = std::move(copy);
    }
    return *this;
}

SupplierEntry SupplierRegistry::register_supplier(std::string prefix, std::string name, CodecKind codec,
                                                  IdScheme scheme) {
    if (!is_well_formed_prefix(prefix)) {
        throw Error(Errc::MalformedPrefix, "supplier prefix \"" + prefix + "\" is not zero-delimited");
    }
    std::unique_lock lock(mutex_);
    for (const auto& e : entries_) {
        const bool overlap = e.prefix.rfind(prefix, 0) == 0 || prefix.rfind(e.prefix, 0) == 0;
        if (overlap) {
            throw Error(Errc::AmbiguousPrefix,
                        "supplier prefix \"" + prefix + "\" overlaps registered prefix \"" + e.prefix + "\"");
        }
    }
    entries_.push_back({std::move(prefix), std::move(name), codec, scheme});
    return entries_.back();
}

void SupplierRegistry::load_lines(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cols.push_back(trim(std::string_view(line).substr(start, comma - start)));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (cols.size() != 4) {
            throw Error(Errc::ConfigError, "registry line needs prefix,name,codec,scheme", line_no);
        }
        const auto codec = codec_kind_from_name(cols[2]);
        const auto scheme = scheme_from_name(to_lower(cols[3]));
        if (!codec || !scheme) {
            throw Error(Errc::ConfigError, "unknown codec or scheme in registry line", line_no);
        }
        register_supplier(cols[0], cols[1], *codec, *scheme);
    }
}

std::optional<SupplierEntry> SupplierRegistry::by_prefix(std::string_view prefix) const {
    std::shared_lock lock(mutex_);
    for (const auto& e : entries_) {
        if (e.prefix == prefix) {
            return e;
        }
    }
    return std::nullopt;
}

std::optional<SupplierEntry> SupplierRegistry::by_name(std::string_view name) const {
    std::shared_lock lock(mutex_);
    for (const auto& e : entries_) {
        if (e.name == name) {
            return e;
        }
    }
    return std::nullopt;
}

std::optional<SupplierEntry> SupplierRegistry::for_scheme(IdScheme scheme) const {
    std::shared_lock lock(mutex_);
    for (const auto& e : entries_) {
        if (e.scheme == scheme) {
            return e;
        }
    }
    return std::nullopt;
}

std::optional<SupplierEntry> SupplierRegistry::match(std::string_view sequence) const {
    std::shared_lock lock(mutex_);
    const SupplierEntry* best = nullptr;
    for (const auto& e : entries_) {
        if (sequence.substr(0, e.prefix.size()) == e.prefix &&
            (best == nullptr || e.prefix.size() > best->prefix.size())) {
            best = &e;
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return *best;
}

std::vector<SupplierEntry> SupplierRegistry::entries() const {
    std::shared_lock lock(mutex_);
    return entries_;
}

std::string encode_local(const SupplierEntry& supplier, std::string_view local_id) {
    std::string out = supplier.prefix;
    if (supplier.codec == CodecKind::VerbatimNumeric) {
        if (!is_digits(local_id) || local_id.front() == '0') {
            throw Error(Errc::BadLocalId, "\"" + std::string(local_id) + "\" is not a positive integer");
        }
        out.append(local_id);
        return out;
    }

    std::string doi = to_lower(local_id);
    if (doi.rfind("doi:", 0) == 0) {
        doi.erase(0, 4);
    }
    if (doi.rfind("10.", 0) != 0 || doi.size() == 3) {
        throw Error(Errc::BadLocalId, "\"" + std::string(local_id) + "\" is not a DOI");
    }
    const auto& table = NumeralTable::standard();
    out.reserve(out.size() + 2 * (doi.size() - 3));
    for (std::size_t i = 3; i < doi.size(); ++i) {
        const auto code = table.code_of(doi[i]);
        if (!code) {
            throw Error(Errc::UnsupportedCharacter,
                        std::string("character '") + doi[i] + "' has no numeral code");
        }
        out.append(*code);
    }
    return out;
}

std::pair<SupplierEntry, std::string> decode_local(const SupplierRegistry& registry, std::string_view sequence) {
    if (!is_digits(sequence)) {
        throw Error(Errc::MalformedSyntax, "numeral sequence must be nonempty decimal digits");
    }
    auto supplier = registry.match(sequence);
    if (!supplier) {
        throw Error(Errc::UnknownPrefix, "no registered supplier prefix starts \"" + std::string(sequence) + "\"");
    }
    const std::string_view body = sequence.substr(supplier->prefix.size());
    if (supplier->codec == CodecKind::VerbatimNumeric) {
        if (body.empty() || body.front() == '0') {
            throw Error(Errc::LeadingZeroBody, "verbatim body \"" + std::string(body) + "\" is empty or zero-led");
        }
        return {std::move(*supplier), std::string(body)};
    }
    return {std::move(*supplier), decode_paired(body)};
}

Oci build_oci(const OciSide& citing, const OciSide& cited) {
    Oci oci;
    oci.text = "oci:" + encode_local(citing.supplier, citing.local_id) + "-" +
               encode_local(cited.supplier, cited.local_id);
    oci.citing = citing;
    oci.cited = cited;
    return oci;
}

Oci parse_oci(const SupplierRegistry& registry, std::string_view text) {
    std::string_view body = text;
    if (body.substr(0, 4) == "oci:") {
        body.remove_prefix(4);
    }
    const auto dash = body.find('-');
    if (dash == std::string_view::npos || !is_digits(body.substr(0, dash)) || !is_digits(body.substr(dash + 1))) {
        throw Error(Errc::MalformedSyntax, "\"" + std::string(text) + "\" does not match oci:[0-9]+-[0-9]+");
    }
    auto decode_side = [&](std::string_view seq, const char* side) {
        try {
            auto [supplier, local] = decode_local(registry, seq);
            return OciSide{std::move(supplier), std::move(local)};
        } catch (const Error& e) {
            throw Error(e.code(), std::string(side) + " side: " + e.what());
        }
    };
    Oci oci;
    oci.citing = decode_side(body.substr(0, dash), "citing");
    oci.cited = decode_side(body.substr(dash + 1), "cited");
    oci.text = "oci:" + std::string(body);
    return oci;
}

} // namespace ocindex
