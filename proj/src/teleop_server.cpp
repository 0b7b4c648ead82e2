#include "npin/teleop_server.hpp"

#include <chrono>
#include <deque>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "npin/teleop_session.hpp"

namespace npin {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

std::pair<std::string, unsigned short> parse_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos || colon == 0) throw ConfigError("--bind expects host:port, got '" + bind + "'");
    const std::string host = bind.substr(0, colon);
    const std::string port = bind.substr(colon + 1);
    try {
        std::size_t used = 0;
        const int p = std::stoi(port, &used);
        if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range("port");
        return {host, static_cast<unsigned short>(p)};
    } catch (const std::logic_error&) {
        throw ConfigError("--bind has an invalid port: '" + port + "'");
    }
}

namespace {

constexpr const char* kBanner =
    "npin teleop server\n"
    "Connect a WebSocket client to this address. Every frame is JSON with v, seq, session.\n"
    "client -> server: {\"v\":1,\"type\":\"control\",\"omega\"|\"heading\"|\"waypoint\":...}\n"
    "                  {\"v\":1,\"type\":\"session\",\"op\":\"reset\"|\"pause\"|\"resume\",\"seed\":N,\"env\":\"maze\"}\n"
    "server -> client: hello, state, episode_end, error\n";

// Snapshots are dropped rather than queued without bound behind a slow client.
constexpr std::size_t kMaxQueuedStates = 8;

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, const TeleopServerOptions& options, std::string id)
        : stream_(std::move(socket)), timer_(stream_.get_executor()), options_(options), id_(std::move(id)) {}

    void start() {
        http::async_read(stream_, buffer_, request_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_request(ec); });
    }

private:
    void on_request(beast::error_code ec) {
        if (ec) return;
        if (!websocket::is_upgrade(request_)) {
            auto res = std::make_shared<http::response<http::string_body>>(http::status::ok, request_.version());
            res->set(http::field::content_type, "text/plain");
            res->body() = kBanner;
            res->prepare_payload();
            http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
                beast::error_code ignored;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
            });
            return;
        }
        ws_.emplace(std::move(stream_));
        ws_->text(true);
        ws_->async_accept(request_, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
    }

    void on_accept(beast::error_code ec) {
        if (ec) return;
        try {
            session_.emplace(options_.config, id_, options_.tick_hz);
        } catch (const std::exception& e) {
            closed_ = true;
            return;
        }
        send(session_->hello());
        send(session_->state_message());
        read();
        period_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / options_.tick_hz));
        next_tick_ = std::chrono::steady_clock::now() + period_;
        schedule();
    }

    void read() {
        ws_->async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->closed_ = true;
                self->timer_.cancel();
                return;
            }
            const std::string text = beast::buffers_to_string(self->in_.data());
            self->in_.consume(self->in_.size());
            for (auto& reply : self->session_->handle_text(text)) self->send(reply);
            self->read();
        });
    }

    void schedule() {
        timer_.expires_at(next_tick_);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (ec || self->closed_) return;
            self->catch_up();
            self->schedule();
        });
    }

    // Runs every tick that is due. Physics is never skipped; only the
    // intermediate state frames are. A backlog past one second is forgiven
    // so a stalled host does not replay minutes of input in a burst.
    void catch_up() {
        const auto now = std::chrono::steady_clock::now();
        if (now - next_tick_ > std::chrono::seconds(1)) next_tick_ = now;
        while (next_tick_ <= now) {
            next_tick_ += period_;
            for (auto& msg : session_->tick(next_tick_ > now)) send(msg);
        }
    }

    void send(const nlohmann::json& msg) {
        if (closed_) return;
        const bool is_state = msg.value("type", std::string{}) == "state";
        if (is_state && queued_states_ >= kMaxQueuedStates) return;
        outbox_.push_back({msg.dump(), is_state});
        if (is_state) ++queued_states_;
        if (outbox_.size() == 1) write();
    }

    void write() {
        ws_->async_write(asio::buffer(outbox_.front().text),
                         [self = shared_from_this()](beast::error_code ec, std::size_t) {
                             if (self->outbox_.front().state) --self->queued_states_;
                             self->outbox_.pop_front();
                             if (ec) {
                                 self->closed_ = true;
                                 self->timer_.cancel();
                                 return;
                             }
                             if (!self->outbox_.empty()) self->write();
                         });
    }

    struct Outgoing {
        std::string text;
        bool state = false;
    };

    beast::tcp_stream stream_;
    std::optional<websocket::stream<beast::tcp_stream>> ws_;
    asio::steady_timer timer_;
    beast::flat_buffer buffer_;
    beast::flat_buffer in_;
    http::request<http::string_body> request_;
    const TeleopServerOptions& options_;
    std::string id_;
    std::optional<TeleopSession> session_;
    std::deque<Outgoing> outbox_;
    std::size_t queued_states_ = 0;
    bool closed_ = false;
    std::chrono::steady_clock::duration period_{};
    std::chrono::steady_clock::time_point next_tick_;
};

}  // namespace

struct TeleopServer::Impl {
    TeleopServerOptions options;
    asio::io_context io;
    tcp::acceptor acceptor{io};
    std::thread thread;
    unsigned long next_id = 1;

    void accept() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            char id[32];
            std::snprintf(id, sizeof id, "s%lu", next_id++);
            std::make_shared<Connection>(std::move(socket), options, id)->start();
            accept();
        });
    }
};

TeleopServer::TeleopServer(TeleopServerOptions options) : impl_(std::make_unique<Impl>()) {
    if (!(options.tick_hz > 0.0) || options.tick_hz > 1000.0) throw ConfigError("--tick-hz must be in (0, 1000]");
    options.config.validate();
    impl_->options = std::move(options);
}

TeleopServer::~TeleopServer() {
    stop();
    wait();
}

void TeleopServer::start() {
    const auto [host, port] = parse_bind(impl_->options.bind);
    tcp::resolver resolver(impl_->io);
    beast::error_code ec;
    const auto results = resolver.resolve(host, std::to_string(port), ec);
    if (ec || results.empty()) throw ConfigError("cannot resolve bind host '" + host + "'");
    const tcp::endpoint endpoint = results.begin()->endpoint();
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint, ec);
    if (ec) throw std::runtime_error("bind " + impl_->options.bind + ": " + ec.message());
    impl_->acceptor.listen();
    impl_->accept();
    impl_->thread = std::thread([this] { impl_->io.run(); });
}

void TeleopServer::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

void TeleopServer::stop() { impl_->io.stop(); }

unsigned short TeleopServer::port() const { return impl_->acceptor.local_endpoint().port(); }

}  // namespace npin
