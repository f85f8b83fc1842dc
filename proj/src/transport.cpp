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

#include "vdattack/transport.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "httplib.h"
#include "vdattack/error.hpp"

namespace vdattack::transport {

namespace {

void check_reply_version(const Json& reply, const std::string& peer) {
    if (!reply.contains("protocol_version")) {
        return;
    }
    const Json& v = reply.at("protocol_version");
    if (!v.is_number_integer() || v.get<int>() != kProtocolVersion) {
        throw ProtocolError(peer + ": unsupported protocol_version " + v.dump());
    }
}

Json parse_reply(const std::string& body, const std::string& peer) {
    Json reply;
    try {
        reply = Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw ProtocolError(peer + ": reply is not JSON: " + e.what());
    }
    if (!reply.is_object()) {
        throw ProtocolError(peer + ": reply is not a JSON object");
    }
    if (reply.contains("error")) {
        const Json& err = reply.at("error");
        throw ProtocolError(peer + ": " + (err.is_string() ? err.get<std::string>() : err.dump()));
    }
    check_reply_version(reply, peer);
    return reply;
}

}  // namespace

HttpTransport::HttpTransport(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {
    constexpr std::string_view scheme = "http://";
    if (url_.rfind(scheme, 0) != 0) {
        throw PreconditionError("only http:// endpoints are supported: " + url_);
    }
    const std::string rest = url_.substr(scheme.size());
    const auto slash = rest.find('/');
    host_port_ = rest.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : rest.substr(slash);
    if (host_port_.empty()) {
        throw PreconditionError("missing host in " + url_);
    }
}

Json HttpTransport::call(const Json& request) {
    // One client per call keeps concurrent callers independent.
    httplib::Client client("http://" + host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    auto res = client.Post(path_, request.dump(), "application/json");
    if (!res) {
        throw TransportError(url_ + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        // Servers put protocol complaints in the body even on 4xx.
        if (!res->body.empty()) {
            parse_reply(res->body, url_);
        }
        throw ProtocolError(url_ + ": HTTP status " + std::to_string(res->status));
    }
    return parse_reply(res->body, url_);
}

ProcessTransport::ProcessTransport(std::vector<std::string> argv) : argv_(std::move(argv)) {
    if (argv_.empty()) {
        throw PreconditionError("empty command for process transport");
    }
}

ProcessTransport::~ProcessTransport() { stop(); }

void ProcessTransport::start() {
    int in_pipe[2];
    int out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
        throw TransportError("pipe: " + std::string(std::strerror(errno)));
    }
    const pid_t pid = fork();
    if (pid < 0) {
        throw TransportError("fork: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        std::vector<char*> args;
        for (auto& a : argv_) {
            args.push_back(a.data());
        }
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    buffer_.clear();
}

void ProcessTransport::stop() {
    if (to_child_ >= 0) {
        close(to_child_);
        to_child_ = -1;
    }
    if (from_child_ >= 0) {
        close(from_child_);
        from_child_ = -1;
    }
    if (pid_ > 0) {
        int status = 0;
        if (waitpid(pid_, &status, WNOHANG) == 0) {
            kill(pid_, SIGTERM);
            waitpid(pid_, &status, 0);
        }
        pid_ = -1;
    }
}

std::string ProcessTransport::read_line() {
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        char chunk[4096];
        const ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            throw TransportError(argv_[0] + ": child process closed its output");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

Json ProcessTransport::call(const Json& request) {
    std::lock_guard lock(mutex_);
    if (pid_ < 0) {
        start();
    }
    const std::string line = request.dump() + "\n";
    std::size_t written = 0;
    // A dead child turns into EPIPE rather than killing us.
    static const bool ignore_sigpipe = [] {
        signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)ignore_sigpipe;
    while (written < line.size()) {
        const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            stop();
            throw TransportError(argv_[0] + ": cannot write to child process");
        }
        written += static_cast<std::size_t>(n);
    }
    std::string reply;
    try {
        reply = read_line();
    } catch (const TransportError&) {
        stop();
        throw;
    }
    return parse_reply(reply, argv_[0]);
}

Json InProcessTransport::call(const Json& request) {
    Json reply = handler_(request);
    if (!reply.is_object()) {
        throw ProtocolError("in-process: reply is not a JSON object");
    }
    if (reply.contains("error")) {
        throw ProtocolError("in-process: " + reply.at("error").dump());
    }
    check_reply_version(reply, "in-process");
    return reply;
}

std::vector<std::string> split_command(std::string_view command) {
    std::vector<std::string> out;
    std::string cur;
    bool have = false;
    char quote = 0;
    for (char c : command) {
        if (quote != 0) {
            if (c == quote) {
                quote = 0;
            } else {
                cur += c;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
            have = true;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (have) {
                out.push_back(std::move(cur));
                cur.clear();
                have = false;
            }
        } else {
            cur += c;
            have = true;
        }
    }
    if (quote != 0) {
        throw PreconditionError("unterminated quote in command: " + std::string(command));
    }
    if (have) {
        out.push_back(std::move(cur));
    }
    return out;
}

std::unique_ptr<JsonTransport> make_transport(std::string_view endpoint) {
    if (endpoint.rfind("http://", 0) == 0) {
        return std::make_unique<HttpTransport>(std::string(endpoint));
    }
    if (endpoint.rfind("cmd:", 0) == 0) {
        return std::make_unique<ProcessTransport>(split_command(endpoint.substr(4)));
    }
    throw PreconditionError("unsupported endpoint '" + std::string(endpoint) + "' (use http://... or cmd:...)");
}

void check_request_version(const Json& request) {
    if (!request.is_object() || !request.contains("protocol_version")) {
        throw ProtocolError("request lacks protocol_version");
    }
    const Json& v = request.at("protocol_version");
    if (!v.is_number_integer() || v.get<int>() != kProtocolVersion) {
        throw ProtocolError("unsupported protocol_version " + v.dump());
    }
}

void serve_stdio(const std::function<Json(const Json&)>& handler, std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        Json reply;
        try {
            reply = handler(Json::parse(line));
        } catch (const std::exception& e) {
            reply = {{"error", e.what()}};
        }
        out << reply.dump() << '\n';
        out.flush();
    }
}

struct HttpServer::Impl {
    httplib::Server server;
    std::thread thread;
};

HttpServer::HttpServer(Handler handler) : impl_(std::make_unique<Impl>()) {
    impl_->server.Post(".*", [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
        Json reply;
        try {
            reply = handler(Json::parse(req.body));
        } catch (const std::exception& e) {
            reply = {{"error", e.what()}};
            res.status = 400;
        }
        res.set_content(reply.dump(), "application/json");
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) {
        throw TransportError("cannot bind " + host + ":" + std::to_string(port));
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void HttpServer::listen_blocking(const std::string& host, int port) {
    if (!impl_->server.listen(host, port)) {
        throw TransportError("cannot listen on " + host + ":" + std::to_string(port));
    }
}

void HttpServer::stop() {
    if (!impl_) {
        return;
    }
    impl_->server.stop();
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

}  // namespace vdattack::transport
