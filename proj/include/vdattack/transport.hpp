/*
 * Copyright 2026 The vdattack Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <chrono>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vdattack::transport {

using Json = nlohmann::json;

/// Version carried by every request of every wire protocol.
inline constexpr int kProtocolVersion = 1;

/// Request/response exchange of one JSON document.
///
/// Implementations throw TransportError when the peer cannot be reached and
/// ProtocolError when the reply is not a JSON object or carries an "error" field.
class JsonTransport {
public:
    virtual ~JsonTransport() = default;
    virtual Json call(const Json& request) = 0;
};

/// POSTs the request to one URL and parses the JSON body of the reply.
class HttpTransport final : public JsonTransport {
public:
    /// `url` is "http://host:port/path"; path defaults to "/".
    explicit HttpTransport(std::string url, std::chrono::milliseconds timeout = std::chrono::seconds(30));
    Json call(const Json& request) override;

    const std::string& url() const { return url_; }

private:
    std::string url_;
    std::string host_port_;
    std::string path_;
    std::chrono::milliseconds timeout_;
};

/// Newline-delimited JSON over the stdin/stdout of a spawned child process.
/// The child is started lazily and kept alive; calls are serialized.
class ProcessTransport final : public JsonTransport {
public:
    explicit ProcessTransport(std::vector<std::string> argv);
    ~ProcessTransport() override;
    ProcessTransport(const ProcessTransport&) = delete;
    ProcessTransport& operator=(const ProcessTransport&) = delete;

    Json call(const Json& request) override;

private:
    void start();
    void stop();
    std::string read_line();

    std::vector<std::string> argv_;
    std::mutex mutex_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

/// Calls a handler in-process; used by tests and to wrap builtin services.
class InProcessTransport final : public JsonTransport {
public:
    using Handler = std::function<Json(const Json&)>;
    explicit InProcessTransport(Handler handler) : handler_(std::move(handler)) {}
    Json call(const Json& request) override;

private:
    Handler handler_;
};

/// Builds a transport from an endpoint string: "http://...", "cmd:<shell words>".
std::unique_ptr<JsonTransport> make_transport(std::string_view endpoint);

/// Splits a command line on whitespace, honoring single and double quotes.
std::vector<std::string> split_command(std::string_view command);

/// Throws ProtocolError unless `request` carries a supported protocol_version.
void check_request_version(const Json& request);

/// Minimal HTTP front end: every POST body is passed to the handler, whose reply is
/// returned as the JSON body. Runs on a background thread until stopped.
class HttpServer {
public:
    using Handler = std::function<Json(const Json&)>;
    explicit HttpServer(Handler handler);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and starts listening; port 0 picks a free port. Returns the bound port.
    int start(const std::string& host, int port);
    /// Blocks the calling thread serving requests (CLI use).
    void listen_blocking(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Serves newline-delimited JSON on the given streams until EOF. Handler exceptions are
/// turned into {"error": ...} replies.
void serve_stdio(const std::function<Json(const Json&)>& handler, std::istream& in, std::ostream& out);

}  // namespace vdattack::transport
