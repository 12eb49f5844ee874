#include <httplib.h>

#include "ocindex/api.hpp"
#include "ocindex/error.hpp"

namespace ocindex {

namespace {

class HttpMetadataClient : public MetadataClient {
public:
    HttpMetadataClient(const std::string& base_url, int timeout) {
        // "http://host:port/some/path" -> client on scheme+host, path kept apart
        const auto scheme = base_url.find("://");
        const auto slash = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
        origin_ = base_url.substr(0, slash);
        path_ = slash == std::string::npos ? std::string() : base_url.substr(slash);
        while (!path_.empty() && path_.back() == '/') {
            path_.pop_back();
        }
        client_ = std::make_unique<httplib::Client>(origin_);
        client_->set_connection_timeout(timeout, 0);
        client_->set_read_timeout(timeout, 0);
        client_->set_follow_location(true);
    }

    std::optional<CrossrefWorkRecord> fetch(const std::string& doi) override {
        std::lock_guard lock(mutex_);
        auto res = client_->Get(path_ + "/" + httplib::detail::encode_url(doi));
        if (!res) {
            throw Error(Errc::IoError, "metadata request for " + doi + " failed: " + httplib::to_string(res.error()));
        }
        if (res->status == 404) {
            return std::nullopt;
        }
        if (res->status != 200) {
            throw Error(Errc::IoError, "metadata request for " + doi + " returned " + std::to_string(res->status));
        }
        return parse_crossref_work(res->body);
    }

private:
    std::mutex mutex_;
    std::string origin_;
    std::string path_;
    std::unique_ptr<httplib::Client> client_;
};

} // namespace

std::unique_ptr<MetadataClient> make_http_metadata_client(const std::string& base_url, int timeout_seconds) {
    return std::make_unique<HttpMetadataClient>(base_url, timeout_seconds);
}

void serve_http(const Service& service, const std::string& host, int port) {
    httplib::Server server;
    server.Get(".*", [&](const httplib::Request& req, httplib::Response& res) {
        Request r;
        r.path = req.path;
        r.accept = req.get_header_value("Accept");
        for (const auto& [k, v] : req.params) {
            r.params.emplace(k, v);
        }
        const Response out = service.handle(r);
        res.status = out.status;
        for (const auto& [k, v] : out.headers) {
            res.set_header(k, v);
        }
        res.set_content(out.body, out.content_type);
    });
    if (!server.bind_to_port(host, port)) {
        throw Error(Errc::IoError, "cannot listen on " + host + ":" + std::to_string(port));
    }
    server.listen_after_bind();
}

} // namespace ocindex
