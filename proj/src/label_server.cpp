#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "fracline/error.hpp"
#include "fracline/image_io.hpp"
#include "fracline/label_service.hpp"

namespace fracline {

using nlohmann::json;

namespace {

json labels_json(const std::vector<LabelRecord>& labels) {
  json arr = json::array();
  for (const auto& r : labels)
    arr.push_back({{"line_id", r.line_id}, {"label", label_name(r.label)}, {"source", source_name(r.source)}});
  return arr;
}

int status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidConfig:
    case ErrorCode::EmptyInput: return 400;
    default: return 500;
  }
}

void send_json(httplib::Response& res, const json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_json(res, {{"error", e.what()}}, status_of(e.code()));
    } catch (const json::exception& e) {
      send_json(res, {{"error", std::string("bad request body: ") + e.what()}}, 400);
    }
  };
}

}  // namespace

struct LabelServer::Impl {
  LabelStore& store;
  httplib::Server http;
  std::thread worker;

  explicit Impl(LabelStore& s) : store(s) {}
};

LabelServer::LabelServer(LabelStore& store, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(store)) {
  auto& http = impl_->http;
  auto& st = impl_->store;

  http.Get("/images", guarded([&st](const httplib::Request&, httplib::Response& res) {
    json arr = json::array();
    for (const auto& [id, s] : *st.snapshot())
      arr.push_back({{"id", id},
                     {"width", s->image->width},
                     {"height", s->image->height},
                     {"lines", s->image->lines.size()},
                     {"labelled", s->events > 0}});
    send_json(res, arr);
  }));

  http.Get(R"(/images/([^/]+)/raw)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto s = st.image(req.matches[1]);
    if (!s->image->pixels) fail(ErrorCode::NotFound, "image " + s->image->id + " has no pixels");
    const auto png = encode_png(*s->image->pixels);
    res.set_content(std::string(png.begin(), png.end()), "image/png");
  }));

  http.Get(R"(/images/([^/]+)/lines)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    res.set_content(segments_to_json(st.image(req.matches[1])->image->lines), "application/json");
  }));

  http.Get(R"(/images/([^/]+)/labels)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    send_json(res, labels_json(st.image(req.matches[1])->labels));
  }));

  http.Post(R"(/images/([^/]+)/regions)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    RegionSelection sel;
    sel.image_id = req.matches[1];
    sel.rect = {body.at("x").get<int>(), body.at("y").get<int>(), body.at("width").get<int>(),
                body.at("height").get<int>()};
    sel.author = body.value("author", "");
    send_json(res, labels_json(st.add_region(sel)));
  }));

  http.Post(R"(/images/([^/]+)/deselect)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    send_json(res, labels_json(st.deselect_line(req.matches[1], body.at("line_id").get<int>())));
  }));

  http.Get("/export.csv", guarded([&st](const httplib::Request&, httplib::Response& res) {
    std::vector<std::string> warnings;
    res.set_content(st.export_csv(&warnings), "text/csv");
    if (!warnings.empty()) res.set_header("X-Export-Warning", warnings.front());
  }));

  if (!static_dir.empty() && !http.set_mount_point("/", static_dir.string()))
    fail(ErrorCode::NotFound, "static directory " + static_dir.string() + " does not exist");
}

LabelServer::~LabelServer() { stop(); }

int LabelServer::start(const std::string& host, int port) {
  auto& http = impl_->http;
  int bound = port;
  if (port == 0) bound = http.bind_to_any_port(host);
  else if (!http.bind_to_port(host, port)) bound = -1;
  if (bound < 0) fail(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([&http] { http.listen_after_bind(); });
  http.wait_until_ready();
  return bound;
}

void LabelServer::listen(const std::string& host, int port) {
  if (!impl_->http.listen(host, port)) fail(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port));
}

void LabelServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace fracline
