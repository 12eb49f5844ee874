#include "ocindex/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ocindex/api.hpp"
#include "ocindex/dataset.hpp"
#include "ocindex/error.hpp"
#include "ocindex/ingestion.hpp"
#include "ocindex/ntriples.hpp"
#include "ocindex/query.hpp"

namespace ocindex::cli {

namespace {

struct Options {
    std::string data;
    std::string format;
    std::string config;
    std::string registry;

    std::string supplier;
    std::string value;
    std::string input = "-";
    std::string output = "-";
    std::string source;
    std::string agent = IngestOptions{}.agent;
    std::string at;
    std::string accept;
    std::string routes;
    std::string host;
    int port = 0;
};

std::string read_all(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error(Errc::IoError, "cannot open " + path);
    }
    return read_all(f);
}

class Context {
public:
    Context(const Options& opts, std::istream& in, std::ostream& out) : opts_(opts), in_(in), out_(out) {}

    Dataset& dataset() {
        if (!dataset_) {
            SupplierRegistry registry;
            if (!opts_.registry.empty()) {
                registry.load_lines(read_file(opts_.registry));
            }
            dataset_ = std::make_unique<Dataset>(registry);
            if (!opts_.data.empty()) {
                // a missing file is a new store; a missing directory is a typo
                const std::filesystem::path path(opts_.data);
                if (std::filesystem::exists(path)) {
                    dataset_->load_file(opts_.data);
                } else if (path.has_parent_path() && !std::filesystem::is_directory(path.parent_path())) {
                    throw Error(Errc::IoError, "data directory " + path.parent_path().string() + " does not exist");
                }
            }
        }
        return *dataset_;
    }

    void persist() {
        if (!opts_.data.empty()) {
            dataset().save_file(opts_.data);
        }
    }

    // "-" is stdin.
    template <typename Fn>
    auto with_input(const std::string& path, Fn fn) {
        if (path == "-") {
            return fn(in_);
        }
        std::ifstream f(path, std::ios::binary);
        if (!f) {
            throw Error(Errc::IoError, "cannot open " + path);
        }
        return fn(f);
    }

    template <typename Fn>
    void with_output(const std::string& path, Fn fn) {
        if (path == "-") {
            fn(out_);
            return;
        }
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error(Errc::IoError, "cannot write " + path);
        }
        fn(f);
    }

    std::ostream& out() { return out_; }

private:
    const Options& opts_;
    std::istream& in_;
    std::ostream& out_;
    std::unique_ptr<Dataset> dataset_;
};

SupplierEntry supplier_of(const SupplierRegistry& registry, const std::string& key) {
    if (auto s = registry.by_prefix(key)) {
        return *s;
    }
    if (auto s = registry.by_name(key)) {
        return *s;
    }
    throw Error(Errc::UnknownPrefix, "no supplier registered as '" + key + "'");
}

IngestOptions ingest_options(const Options& o, const std::string& default_source) {
    IngestOptions io;
    io.source = o.source.empty() ? default_source : o.source;
    io.agent = o.agent;
    if (!o.at.empty()) {
        io.at = parse_timestamp(o.at);
    }
    return io;
}

Format output_format(const Options& o, Format fallback) {
    if (o.format.empty()) {
        return fallback;
    }
    const auto f = format_from_name(o.format);
    if (!f) {
        throw Error(Errc::NotAcceptable, "unsupported format '" + o.format + "'");
    }
    return *f;
}

std::string render_bindings(const BindingSet& b, Format f) {
    if (f == Format::Csv) {
        std::string out;
        for (std::size_t i = 0; i < b.variables.size(); ++i) {
            out += (i ? "," : "") + b.variables[i];
        }
        out += "\n";
        for (const auto& row : b.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::string v = row[i].value;
                if (v.find_first_of(",\"\n\r") != std::string::npos) {
                    std::string q = "\"";
                    for (char c : v) {
                        q += c == '"' ? std::string("\"\"") : std::string(1, c);
                    }
                    v = q + "\"";
                }
                out += (i ? "," : "") + v;
            }
            out += "\n";
        }
        return out;
    }
    if (f != Format::Json) {
        throw Error(Errc::NotAcceptable, "query results render as json or csv");
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : b.rows) {
        nlohmann::ordered_json j;
        for (std::size_t i = 0; i < row.size(); ++i) {
            j[b.variables[i]] = row[i].to_string();
        }
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string stats_json(const Dataset& ds) {
    const auto s = ds.stats();
    nlohmann::ordered_json j;
    j["resources"] = s.resources;
    j["agents"] = s.agents;
    j["citations"] = s.citations;
    j["references"] = s.references;
    j["snapshots"] = s.snapshots;
    j["quads"] = s.quads;
    j["oci_table"] = std::string(kNumeralTableVersion);
    return j.dump(2) + "\n";
}

std::string history_json(const std::vector<Snapshot>& history) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : history) {
        nlohmann::ordered_json j;
        j["snapshot"] = s.iri();
        j["seq"] = s.seq;
        j["generated_at"] = format_timestamp(s.generated_at);
        j["invalidated_at"] = s.invalidated_at ? format_timestamp(*s.invalidated_at) : std::string();
        j["agent"] = s.agent;
        j["source"] = s.primary_source;
        j["description"] = s.description;
        j["update"] = s.seq > 1 ? serialize_delta(s.delta) : std::string();
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"ocindex: open citation index engine", "ocindex"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.add_option("--data", o.data, "N-Quads file holding the dataset");
    app.add_option("--format", o.format, "Output format: json, csv, scholix, ntriples");
    app.add_option("--config", o.config, "Service settings file (key=value)");
    app.add_option("--registry", o.registry, "Extra supplier prefixes as prefix,name,codec,scheme lines");

    auto* oci = app.add_subcommand("oci", "Open Citation Identifier utilities");
    oci->require_subcommand(1, 1);
    auto* encode = oci->add_subcommand("encode", "Encode a local identifier under a supplier prefix");
    encode->add_option("--supplier", o.supplier, "Supplier prefix or name")->required();
    encode->add_option("id", o.value, "Local identifier (DOI, OCC number...)")->required();
    auto* decode = oci->add_subcommand("decode", "Decode an OCI or one numeral sequence");
    decode->add_option("value", o.value, "oci:... or a numeral sequence")->required();
    auto* validate_cmd = oci->add_subcommand("validate", "Check that an OCI decodes under the registry");
    validate_cmd->add_option("oci", o.value, "OCI text")->required();

    auto* ingest = app.add_subcommand("ingest", "Load data into the dataset");
    ingest->require_subcommand(1, 1);
    auto* works = ingest->add_subcommand("works", "Crossref-style works dump (JSON lines or array)");
    auto* csv = ingest->add_subcommand("csv", "Citation CSV (7-column or citing_id,cited_id)");
    for (auto* sub : {works, csv}) {
        sub->add_option("input", o.input, "File or - for stdin");
        sub->add_option("--source", o.source, "Primary source recorded in provenance");
        sub->add_option("--agent", o.agent, "Curatorial agent recorded in provenance");
        sub->add_option("--at", o.at, "Snapshot time, YYYY-MM-DDTHH:MM:SSZ (default: now)");
    }

    auto* exp = app.add_subcommand("export", "Write dataset dumps");
    exp->require_subcommand(1, 1);
    auto* exp_csv = exp->add_subcommand("csv", "Citation CSV sorted by OCI");
    auto* exp_nq = exp->add_subcommand("nquads", "All quads including provenance graphs");
    for (auto* sub : {exp_csv, exp_nq}) {
        sub->add_option("-o,--output", o.output, "File or - for stdout");
    }

    auto* query = app.add_subcommand("query", "Run a SELECT query");
    query->add_option("input", o.input, "Query file or - for stdin");

    auto* resolve = app.add_subcommand("resolve", "Render the citation an OCI identifies");
    resolve->add_option("oci", o.value, "OCI text")->required();

    auto* history = app.add_subcommand("history", "Provenance snapshots of an entity");
    history->add_option("entity", o.value, "Entity IRI")->required();
    history->add_option("--at", o.at, "Print the entity's quads as they were at this time");

    auto* api = app.add_subcommand("api", "Answer one API request, byte-identical to the HTTP service");
    api->add_option("path", o.value, "Request target, e.g. /index/api/v1/citations/10.1/x?format=csv")->required();
    api->add_option("--accept", o.accept, "Accept header value");
    api->add_option("--routes", o.routes, "Route configuration file");

    auto* serve = app.add_subcommand("serve", "Serve the REST API over HTTP");
    serve->add_option("--routes", o.routes, "Route configuration file");
    serve->add_option("--host", o.host, "Listen address");
    serve->add_option("--port", o.port, "Listen port");

    auto* stats = app.add_subcommand("stats", "Entity and citation counts");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return 2;
    }

    Context ctx(o, in, out);
    try {
        if (encode->parsed()) {
            const auto& registry = ctx.dataset().registry();
            const auto sup = supplier_of(registry, o.supplier);
            std::string value = o.value;
            if (auto id = make_identifier(sup.scheme, value)) {
                value = id->value;
            }
            out << encode_local(sup, value) << "\n";
        } else if (decode->parsed()) {
            const auto& registry = ctx.dataset().registry();
            const std::string v = trim(o.value);
            if (v.rfind("oci:", 0) == 0 || v.find('-') != std::string::npos) {
                const auto parsed = parse_oci(registry, v);
                out << "citing " << render_identifier(parsed.citing.identifier()) << "\n";
                out << "cited " << render_identifier(parsed.cited.identifier()) << "\n";
            } else {
                const auto [sup, local] = decode_local(registry, v);
                out << local << "\n";
            }
        } else if (validate_cmd->parsed()) {
            try {
                parse_oci(ctx.dataset().registry(), trim(o.value));
            } catch (const Error& e) {
                out << "invalid\n";
                err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
                return 1;
            }
            out << "valid\n";
        } else if (works->parsed() || csv->parsed()) {
            auto& ds = ctx.dataset();
            const auto io = ingest_options(o, o.input == "-" ? "stdin" : o.input);
            const IngestReport report = ctx.with_input(o.input, [&](std::istream& s) {
                return works->parsed() ? ingest_works(ds, s, io) : ingest_csv(ds, s, io);
            });
            ctx.persist();
            out << report_json(report) << "\n";
        } else if (exp_csv->parsed()) {
            ctx.with_output(o.output, [&](std::ostream& s) { export_citations_csv(ctx.dataset(), s); });
        } else if (exp_nq->parsed()) {
            ctx.with_output(o.output, [&](std::ostream& s) { ctx.dataset().save(s); });
        } else if (query->parsed()) {
            const std::string text = ctx.with_input(o.input, [](std::istream& s) { return read_all(s); });
            const Query q = parse_query(text);
            out << render_bindings(evaluate(ctx.dataset().store(), q), output_format(o, Format::Json));
        } else if (resolve->parsed()) {
            Service service(ctx.dataset());
            out << service.resolve(o.value, output_format(o, Format::Json));
        } else if (history->parsed()) {
            const auto& prov = ctx.dataset().provenance();
            if (o.at.empty()) {
                out << history_json(prov.history(o.value));
            } else {
                write_nquads(out, prov.reconstruct_at(o.value, parse_timestamp(o.at)));
            }
        } else if (api->parsed()) {
            const auto routes = o.routes.empty() ? builtin_routes() : load_route_config(read_file(o.routes));
            Service service(ctx.dataset(), routes);
            std::string target = o.value;
            if (!o.format.empty()) {
                target += (target.find('?') == std::string::npos ? "?" : "&") + std::string("format=") + o.format;
            }
            const Response r = service.get(target, o.accept);
            out << r.body;
            if (r.status >= 400) {
                err << "error: HTTP " << r.status << "\n";
                return 1;
            }
        } else if (serve->parsed()) {
            ServiceSettings settings;
            if (!o.config.empty()) {
                settings = load_settings(read_file(o.config));
            }
            if (!o.data.empty()) {
                settings.data = o.data;
            }
            if (!o.routes.empty()) {
                settings.routes = o.routes;
            }
            if (!o.host.empty()) {
                settings.host = o.host;
            }
            if (o.port != 0) {
                settings.port = o.port;
            }
            o.data = settings.data;
            auto& ds = ctx.dataset();
            const auto routes = settings.routes.empty() ? builtin_routes() : load_route_config(read_file(settings.routes));
            std::unique_ptr<MetadataClient> remote;
            if (!settings.remote_url.empty()) {
                remote = make_http_metadata_client(settings.remote_url);
            }
            Service service(ds, routes, remote.get());
            err << "serving " << kApiBase << " on http://" << settings.host << ":" << settings.port << "\n";
            serve_http(service, settings.host, settings.port);
        } else if (stats->parsed()) {
            out << stats_json(ctx.dataset());
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace ocindex::cli
