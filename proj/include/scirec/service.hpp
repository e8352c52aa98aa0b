#pragma once
// Read-only HTTP query service over a built model directory.
//
//   GET /health
//   GET /keywords?q=<prefix>&k=<n>
//   GET /keywords/{id}/papers?mode=universal|local&k=<n>
//   GET /keywords/{id}/related?k=<n>
//   GET /papers/{id}/readmore?keyword=<kid>&k=<n>
//
// Bodies are JSON. Every body carries "corpus_hash"; errors are
// {"code", "message", "status", "corpus_hash"}.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scirec/model_bundle.hpp"
#include "scirec/recommender.hpp"

namespace httplib {
class Server;
}

namespace scirec {

struct ServiceConfig {
    std::filesystem::path model_dir;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t default_k = 10;
    RelationThresholds thresholds;
};

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

class QueryService {
public:
    explicit QueryService(ServiceConfig cfg);

    // Loads config().model_dir and swaps it in atomically; in-flight
    // requests finish against the model they started with.
    void reload();
    void set_model(std::shared_ptr<const ModelBundle> bundle);
    std::shared_ptr<const ModelBundle> model() const;

    const ServiceConfig& config() const { return cfg_; }

    ServiceResponse health() const;
    ServiceResponse keywords(std::string_view prefix, std::optional<std::string_view> k) const;
    ServiceResponse keyword_papers(std::string_view keyword, std::optional<std::string_view> mode,
                                   std::optional<std::string_view> k) const;
    ServiceResponse keyword_related(std::string_view keyword, std::optional<std::string_view> k) const;
    ServiceResponse read_more(std::string_view paper, std::optional<std::string_view> keyword,
                              std::optional<std::string_view> k) const;

    // Registers the routes on `server`. The service must outlive it.
    void mount(httplib::Server& server) const;

private:
    ServiceConfig cfg_;
    mutable std::mutex mu_;
    std::shared_ptr<const ModelBundle> bundle_;
};

}  // namespace scirec
