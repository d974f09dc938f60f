#include "vgroup/service.hpp"

#include "vgroup/model_io.hpp"
#include "vgroup/svg.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>

namespace vgroup {

using nlohmann::json;

GraphicService::GraphicService(CorpusIndex index, std::shared_ptr<const AffinityModel> model)
    : model_(std::move(model)) {
    for (auto& e : index.entries) corpus_.emplace(e.id, std::move(e));
}

std::vector<std::string> GraphicService::ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, _] : corpus_) out.push_back(id);
    for (const auto& [id, _] : uploads_) out.push_back(id);
    std::ranges::sort(out);
    return out;
}

std::string GraphicService::svg(const std::string& id) const {
    std::unique_lock lock(mutex_);
    if (auto it = uploads_.find(id); it != uploads_.end()) return it->second;
    const auto it = corpus_.find(id);
    if (it == corpus_.end()) throw NotFound("unknown graphic '" + id + "'");
    const std::filesystem::path path = it->second.svg_path;
    lock.unlock();
    return read_file(path);
}

std::shared_ptr<const VectorDocument> GraphicService::document(const std::string& id) {
    return docs_.get(id, [&] {
        return std::make_shared<const VectorDocument>(parse_document(svg(id), {.tolerance = std::nullopt, .source_id = id}));
    });
}

std::string GraphicService::fingerprint() const { return model_ ? model_->fingerprint() : std::string("oracle"); }

std::shared_ptr<const GroupTree> GraphicService::tree(const std::string& id, bool containment) {
    return trees_.get({id, fingerprint(), containment}, [&] {
        const auto doc = document(id);
        std::shared_ptr<const AffinityModel> model = model_;
        if (!model) {
            std::optional<std::filesystem::path> tree_path;
            {
                std::lock_guard lock(mutex_);
                if (auto it = corpus_.find(id); it != corpus_.end()) tree_path = it->second.tree_path;
            }
            if (!tree_path) throw ValidationError("graphic '" + id + "' has no ground truth for the oracle");
            GroupTree gt = deserialize(read_file(*tree_path));
            if (auto v = validate(gt, doc->size())) throw ValidationError("ground truth of '" + id + "': " + v->message());
            model = std::make_shared<const OracleAffinity>(std::move(gt));
        }
        return std::make_shared<const GroupTree>(containment ? containment_guided_tree(*model, *doc)
                                                             : greedy_tree(*model, *doc));
    });
}

std::vector<Suggestion> GraphicService::suggest(const std::string& id, const std::vector<int>& paths, int k,
                                                bool containment) {
    const auto doc = document(id);
    for (int p : paths) {
        if (p < 0 || p >= doc->size()) throw std::out_of_range("path " + std::to_string(p) + " out of range");
    }
    return scribble_suggest(*tree(id, containment), paths, k);
}

std::string GraphicService::upload(const std::string& svg_text) {
    parse_document(svg_text);
    const std::string id = "upload-" + hex64(fnv1a(svg_text)).substr(0, 12);
    std::lock_guard lock(mutex_);
    uploads_.emplace(id, svg_text);
    return id;
}

// --- HTTP -------------------------------------------------------------------

namespace {

constexpr const char* kPlaceholderIndex = R"html(<!doctype html>
<html><head><meta charset="utf-8"><title>vgroup</title></head>
<body><p>The selection UI bundle is not installed. The JSON API lives under <code>/api/graphics</code>.</p></body></html>
)html";

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, json{{"error", message}}, status);
}

std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        int v = 0;
        const char* b = text.data() + start;
        const char* e = text.data() + comma;
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e) throw std::invalid_argument("bad path list '" + text + "'");
        out.push_back(v);
        start = comma + 1;
    }
    return out;
}

bool flag(const httplib::Request& req, const char* name, bool fallback) {
    if (!req.has_param(name)) return fallback;
    const std::string v = req.get_param_value(name);
    return v == "1" || v == "true" || v.empty();
}

} // namespace

struct HttpServer::Impl {
    Impl(GraphicService& s, HttpOptions o) : service(s), options(std::move(o)) {}

    GraphicService& service;
    HttpOptions options;
    httplib::Server server;

    // Runs a handler and maps library errors onto HTTP statuses.
    template <class F>
    auto guarded(F f) {
        return [f](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const NotFound& e) {
                send_error(res, 404, e.what());
            } catch (const MalformedInput& e) {
                send_error(res, 422, e.what());
            } catch (const EmptyDocument& e) {
                send_error(res, 422, e.what());
            } catch (const ValidationError& e) {
                send_error(res, 409, e.what());
            } catch (const ParseError& e) {
                send_error(res, 409, e.what());
            } catch (const EmptyScribble& e) {
                send_error(res, 400, e.what());
            } catch (const std::invalid_argument& e) {
                send_error(res, 400, e.what());
            } catch (const std::out_of_range& e) {
                send_error(res, 400, e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, e.what());
            }
        };
    }

    void install() {
        server.Get("/api/graphics", guarded([this](const httplib::Request&, httplib::Response& res) {
                       send_json(res, service.ids());
                   }));
        server.Get("/api/graphics/:id/svg", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       res.set_content(service.svg(req.path_params.at("id")), "image/svg+xml");
                   }));
        server.Get("/api/graphics/:id/doc", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       res.set_content(to_doc_json(*service.document(req.path_params.at("id"))), "application/json");
                   }));
        server.Get("/api/graphics/:id/tree", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const bool cg = flag(req, "containment", options.containment);
                       res.set_content(serialize(*service.tree(req.path_params.at("id"), cg)), "application/json");
                   }));
        server.Get("/api/graphics/:id/suggest", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const std::string id = req.path_params.at("id");
                       const std::vector<int> paths = parse_index_list(req.get_param_value("paths"));
                       const int k = req.has_param("k") ? std::stoi(req.get_param_value("k")) : 3;
                       const bool cg = flag(req, "containment", options.containment);
                       const auto tree = service.tree(id, cg);
                       json out = json::array();
                       for (const Suggestion& s : service.suggest(id, paths, k, cg)) {
                           out.push_back({{"node", s.node}, {"score", s.score}, {"leaves", tree->leaves_of(s.node)}});
                       }
                       send_json(res, out);
                   }));
        server.Post("/api/graphics", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        std::string text;
                        if (req.has_file("file")) text = req.get_file_value("file").content;
                        else if (!req.files.empty()) text = req.files.begin()->second.content;
                        else throw std::invalid_argument("expected a multipart upload with an svg file");
                        send_json(res, json{{"id", service.upload(text)}}, 201);
                    }));

        bool mounted = false;
        if (options.static_dir && std::filesystem::is_regular_file(*options.static_dir / "index.html")) {
            mounted = server.set_mount_point("/", options.static_dir->string());
        }
        if (!mounted) {
            server.Get("/", [](const httplib::Request&, httplib::Response& res) {
                res.set_content(kPlaceholderIndex, "text/html");
            });
        }
        server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
            if (res.body.empty()) send_error(res, res.status, "no route for " + req.method + " " + req.path);
        });
    }
};

HttpServer::HttpServer(GraphicService& service, HttpOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
    impl_->install();
}

HttpServer::~HttpServer() = default;

int HttpServer::bind() {
    Impl& s = *impl_;
    if (s.options.port == 0) {
        const int port = s.server.bind_to_any_port(s.options.host);
        if (port < 0) throw std::runtime_error("cannot bind " + s.options.host);
        return port;
    }
    if (!s.server.bind_to_port(s.options.host, s.options.port)) {
        throw std::runtime_error("cannot bind " + s.options.host + ":" + std::to_string(s.options.port) +
                                 " (port in use?)");
    }
    return s.options.port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

} // namespace vgroup
