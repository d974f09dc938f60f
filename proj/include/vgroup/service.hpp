#pragma once

#include "vgroup/affinity.hpp"
#include "vgroup/corpus.hpp"
#include "vgroup/errors.hpp"
#include "vgroup/infer.hpp"

#include <atomic>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace vgroup {

class NotFound : public Error {
public:
    using Error::Error;
};

// Map whose values are computed at most once per key, even when several
// threads ask for the same key at the same time: later callers wait for the
// first one. A failed computation is forgotten so it can be retried.
template <class Key, class Value>
class SingleFlightCache {
public:
    std::shared_ptr<const Value> get(const Key& key, const std::function<std::shared_ptr<const Value>()>& compute) {
        std::unique_lock lock(mutex_);
        if (auto it = slots_.find(key); it != slots_.end()) {
            auto pending = it->second;
            lock.unlock();
            return pending.get();
        }
        std::promise<std::shared_ptr<const Value>> promise;
        slots_.emplace(key, promise.get_future().share());
        lock.unlock();
        try {
            auto value = compute();
            ++computed_;
            promise.set_value(value);
            return value;
        } catch (...) {
            promise.set_exception(std::current_exception());
            lock.lock();
            slots_.erase(key);
            throw;
        }
    }

    // Number of successful computations so far.
    std::size_t computed() const { return computed_; }

private:
    std::mutex mutex_;
    std::map<Key, std::shared_future<std::shared_ptr<const Value>>> slots_;
    std::atomic<std::size_t> computed_{0};
};

// Request logic behind the HTTP endpoints, independent of the transport.
// With a null model the ground truth of each graphic drives an oracle.
class GraphicService {
public:
    GraphicService(CorpusIndex index, std::shared_ptr<const AffinityModel> model);

    std::vector<std::string> ids() const;
    // The raw SVG text. Throws NotFound.
    std::string svg(const std::string& id) const;
    std::shared_ptr<const VectorDocument> document(const std::string& id);
    // Inferred lazily and cached per (id, model fingerprint, containment).
    std::shared_ptr<const GroupTree> tree(const std::string& id, bool containment);
    std::vector<Suggestion> suggest(const std::string& id, const std::vector<int>& paths, int k, bool containment);
    // Stores an uploaded graphic (kept in memory) and returns its id. Throws
    // MalformedInput / EmptyDocument for unusable SVG.
    std::string upload(const std::string& svg_text);

    std::size_t inference_count() const { return trees_.computed(); }

private:
    std::string fingerprint() const;

    mutable std::mutex mutex_;
    std::map<std::string, CorpusEntry> corpus_;
    std::map<std::string, std::string> uploads_;
    std::shared_ptr<const AffinityModel> model_;
    SingleFlightCache<std::string, VectorDocument> docs_;
    SingleFlightCache<std::tuple<std::string, std::string, bool>, GroupTree> trees_;
};

struct HttpOptions {
    std::string host = "127.0.0.1";
    int port = 8080; // 0 picks a free port
    bool containment = false; // default for /tree when the query does not say
    std::optional<std::filesystem::path> static_dir; // UI bundle; a placeholder index otherwise
};

class HttpServer {
public:
    HttpServer(GraphicService& service, HttpOptions options);
    ~HttpServer();

    // Binds the socket and returns the bound port. Throws std::runtime_error
    // when the port is unavailable.
    int bind();
    // Serves until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace vgroup
