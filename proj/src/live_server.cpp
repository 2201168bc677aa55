#include "tdteach/live_server.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include <boost/asio/executor_work_guard.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "tdteach/error.hpp"
#include "tdteach/live.hpp"
#include "tdteach/session_log.hpp"
#include "tdteach/wire.hpp"

namespace tdteach {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

const char* mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

}  // namespace

class WsSession;

class LiveServer::Impl final : public LiveTransport {
 public:
  explicit Impl(LiveServerOptions options)
      : opts_(std::move(options)), next_mode_(opts_.config.mode), work_(net::make_work_guard(ioc_)) {}

  ~Impl() override { stop(); }

  bool connected() const override { return connected_.load() && !stopping_flag_.load(); }
  void send(const json& message) override;
  std::vector<TimedFeedback> drain_feedback() override { return inbox_.drain(); }
  bool await_running() override;

  std::uint16_t start();
  void stop();
  void wait();
  std::vector<std::filesystem::path> completed_logs() const {
    std::lock_guard lock(mu_);
    return logs_;
  }

  // io-thread callbacks
  void attach(const std::shared_ptr<WsSession>& session);
  void detach(const WsSession* session);
  void on_client_text(const std::string& text);
  const std::filesystem::path& static_dir() const { return opts_.static_dir; }

 private:
  void do_accept();
  void session_loop();
  void queue_to_client(std::string text);
  void request_stop();

  LiveServerOptions opts_;
  net::io_context ioc_;
  tcp::acceptor acceptor_{ioc_};
  std::optional<net::signal_set> signals_;
  SteadyClock clock_;
  FeedbackInbox inbox_;

  std::atomic<bool> connected_{false};
  std::atomic<bool> stopping_flag_{false};
  std::shared_ptr<WsSession> client_;  // io thread only

  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  bool start_requested_ = false;
  bool running_ = false;
  bool paused_ = false;
  bool started_ = false;
  bool joined_ = false;
  Mode next_mode_;
  std::size_t session_counter_ = 0;
  std::optional<std::string> last_session_start_;
  std::optional<std::string> last_phase_;
  std::vector<std::filesystem::path> logs_;

  net::executor_work_guard<net::io_context::executor_type> work_;
  std::thread io_thread_;
  std::thread session_thread_;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, LiveServer::Impl& server)
      : ws_(std::move(socket)), server_(server) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->server_.attach(self);
      self->do_read();
    });
  }

  void queue(std::string text) {
    if (closed_) return;
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) do_write();
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
  }

 private:
  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->server_.detach(self.get());
        return;
      }
      self->server_.on_client_text(beast::buffers_to_string(self->buffer_.data()));
      self->buffer_.consume(self->buffer_.size());
      self->do_read();
    });
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->server_.detach(self.get());
                        return;
                      }
                      self->outbox_.pop_front();
                      if (!self->outbox_.empty() && !self->closed_) self->do_write();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  LiveServer::Impl& server_;
  bool closed_ = false;
};

/// Reads one HTTP request: upgrades to a web socket or answers with a file.
class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, LiveServer::Impl& server)
      : stream_(std::move(socket)), server_(server) {}

  void run() {
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (!ec) self->on_request();
                     });
  }

 private:
  void on_request() {
    if (websocket::is_upgrade(req_)) {
      std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(req_));
      return;
    }
    auto res = std::make_shared<http::response<http::string_body>>(file_response());
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  http::response<http::string_body> file_response() {
    http::response<http::string_body> res;
    res.version(req_.version());
    res.keep_alive(false);
    const std::string target(req_.target());
    const bool bad_target = target.empty() || target.front() != '/' ||
                            target.find("..") != std::string::npos;
    std::filesystem::path file;
    if (!server_.static_dir().empty() && !bad_target && req_.method() == http::verb::get) {
      file = server_.static_dir() / (target == "/" ? std::string("index.html") : target.substr(1));
    }
    std::ifstream in(file, std::ios::binary);
    if (file.empty() || !in) {
      res.result(http::status::not_found);
      res.set(http::field::content_type, "text/plain");
      res.body() = "not found\n";
    } else {
      res.result(http::status::ok);
      res.set(http::field::content_type, mime_type(file));
      res.body().assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    res.prepare_payload();
    return res;
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  LiveServer::Impl& server_;
};

void LiveServer::Impl::send(const json& message) {
  std::string text = message.dump();
  {
    std::lock_guard lock(mu_);
    const auto& type = message.at("type");
    if (type == "session_start") {
      last_session_start_ = text;
      last_phase_.reset();
    } else if (type == "phase_start") {
      last_phase_ = text;
    }
  }
  queue_to_client(std::move(text));
}

void LiveServer::Impl::queue_to_client(std::string text) {
  net::post(ioc_, [this, text = std::move(text)]() mutable {
    if (client_) client_->queue(std::move(text));
  });
}

bool LiveServer::Impl::await_running() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return stopping_ || !connected_.load() || !paused_; });
  return !stopping_ && connected_.load();
}

void LiveServer::Impl::attach(const std::shared_ptr<WsSession>& session) {
  if (client_) client_->close();
  client_ = session;
  connected_ = true;
  std::optional<std::string> start_msg;
  std::optional<std::string> phase_msg;
  {
    std::lock_guard lock(mu_);
    start_msg = last_session_start_;
    phase_msg = last_phase_;
  }
  if (start_msg) client_->queue(*start_msg);
  if (phase_msg) client_->queue(*phase_msg);
  cv_.notify_all();
}

void LiveServer::Impl::detach(const WsSession* session) {
  if (client_.get() != session) return;
  client_.reset();
  connected_ = false;
  cv_.notify_all();
}

void LiveServer::Impl::on_client_text(const std::string& text) {
  wire::ClientMessage msg;
  try {
    msg = wire::parse_client_message(text);
  } catch (const FormatError& e) {
    if (client_) client_->queue(wire::error(e.what()).dump());
    return;
  }
  if (const auto* fb = std::get_if<wire::FeedbackMessage>(&msg)) {
    inbox_.push(TimedFeedback{clock_.now_ms(), fb->value});
    return;
  }
  const auto& ctl = std::get<wire::ControlMessage>(msg);
  std::lock_guard lock(mu_);
  switch (ctl.action) {
    case wire::ControlAction::Start:
      if (running_) {
        paused_ = false;
      } else {
        start_requested_ = true;
      }
      break;
    case wire::ControlAction::Pause:
      if (running_) paused_ = true;
      break;
    case wire::ControlAction::Mode:
      next_mode_ = *ctl.mode;
      if (running_ && client_) {
        client_->queue(wire::error("mode change takes effect with the next session").dump());
      }
      break;
  }
  cv_.notify_all();
}

void LiveServer::Impl::do_accept() {
  acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<HttpSession>(std::move(socket), *this)->run();
    do_accept();
  });
}

void LiveServer::Impl::session_loop() {
  while (true) {
    SessionConfig cfg;
    std::filesystem::path path;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return stopping_ || start_requested_; });
      if (stopping_) return;
      start_requested_ = false;
      running_ = true;
      paused_ = false;
      cfg = opts_.config;
      cfg.mode = next_mode_;
      cfg.teacher.reset();
      char name[64];
      std::snprintf(name, sizeof(name), "session_%03zu_%s.jsonl", ++session_counter_,
                    std::string(to_string(cfg.mode)).c_str());
      path = opts_.log_dir / name;
    }
    std::ofstream out(path);
    if (out) {
      JsonlLogWriter writer(out);
      LivePlayer player(*this, clock_, opts_.tick_ms);
      SessionEngine engine(cfg, player, &writer);
      engine.run_session();
    } else {
      queue_to_client(wire::error("cannot open session log " + path.string()).dump());
    }
    std::lock_guard lock(mu_);
    running_ = false;
    paused_ = false;
    if (out) logs_.push_back(path);
    cv_.notify_all();
  }
}

std::uint16_t LiveServer::Impl::start() {
  {
    std::lock_guard lock(mu_);
    if (started_) throw PreconditionError("live server already started");
    started_ = true;
  }
  opts_.config.validate();
  const tcp::endpoint endpoint(net::ip::make_address(opts_.bind_address), opts_.port);
  acceptor_.open(endpoint.protocol());
  acceptor_.set_option(net::socket_base::reuse_address(true));
  acceptor_.bind(endpoint);
  acceptor_.listen(net::socket_base::max_listen_connections);
  const std::uint16_t port = acceptor_.local_endpoint().port();

  signals_.emplace(ioc_, SIGINT, SIGTERM);
  signals_->async_wait([this](beast::error_code ec, int) {
    if (!ec) request_stop();
  });

  do_accept();
  io_thread_ = std::thread([this] { ioc_.run(); });
  session_thread_ = std::thread([this] { session_loop(); });
  return port;
}

void LiveServer::Impl::request_stop() {
  stopping_flag_ = true;
  std::lock_guard lock(mu_);
  stopping_ = true;
  cv_.notify_all();
}

void LiveServer::Impl::wait() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return stopping_; });
}

void LiveServer::Impl::stop() {
  {
    std::lock_guard lock(mu_);
    if (!started_ || joined_) return;
    joined_ = true;
  }
  request_stop();
  if (session_thread_.joinable()) session_thread_.join();
  net::post(ioc_, [this] {
    beast::error_code ignored;
    acceptor_.close(ignored);
    if (signals_) signals_->cancel(ignored);
    if (client_) client_->close();
    client_.reset();
    connected_ = false;
  });
  work_.reset();
  // Give the close handshake a moment, then force the loop down.
  std::thread killer([this] {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    ioc_.stop();
  });
  if (io_thread_.joinable()) io_thread_.join();
  killer.join();
}

LiveServer::LiveServer(LiveServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
LiveServer::~LiveServer() = default;

std::uint16_t LiveServer::start() { return impl_->start(); }
void LiveServer::stop() { impl_->stop(); }
void LiveServer::wait() { impl_->wait(); }
std::vector<std::filesystem::path> LiveServer::completed_logs() const { return impl_->completed_logs(); }

}  // namespace tdteach
