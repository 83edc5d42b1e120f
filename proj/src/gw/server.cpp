// Copyright 2026 The fleetd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fleet/gw/server.hpp"

#include <httplib.h>

namespace fleet::gw {

using nlohmann::json;

namespace {

int status_for(Errc code) {
  switch (code) {
    case Errc::ValidationError:
    case Errc::MalformedKey:
    case Errc::ParseError:
    case Errc::InvalidPlan:
    case Errc::UnknownEventKind:
      return 400;
    case Errc::Unauthorized:
    case Errc::NotOwner:
      return 403;
    case Errc::NotFound:
    case Errc::UnknownNode:
    case Errc::UnknownImage:
    case Errc::UnknownRequestType:
      return 404;
    case Errc::StaleVersion:
    case Errc::EpochStale:
    case Errc::ConsistencyMismatch:
      return 409;
    default:
      return 500;
  }
}

}  // namespace

GatewayServer::GatewayServer(CommandRouter& router, state::StateStore& store, Options options)
    : router_(router), store_(store), options_(std::move(options)) {}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::install_routes() {
  auto handle = [this](const std::string& verb, json args, httplib::Response& res) {
    if (lame_duck_.load()) {
      res.status = 503;
      res.set_header("X-Failover", "true");
      res.set_content(json{{"error", "unavailable"}}.dump(), "application/json");
      return;
    }
    Result<json> out = [&] {
      std::lock_guard lock(mu_);
      return router_.apply(Command{verb, std::move(args)});
    }();
    if (out.ok()) {
      res.status = 200;
      res.set_content(out.value().dump(), "application/json");
    } else {
      res.status = status_for(out.code());
      res.set_content(json{{"error", to_string(out.code())},
                           {"detail", out.error().detail}}
                          .dump(),
                      "application/json");
    }
  };
  auto body_args = [](const httplib::Request& req) {
    json args = json::parse(req.body.empty() ? "{}" : req.body, nullptr, false);
    return args.is_discarded() || !args.is_object() ? json::object() : args;
  };

  server_->Get(R"(/v1/facts/([^/]+)/([^/]+)/([^/]+))",
               [=, this](const httplib::Request& req, httplib::Response& res) {
                 json args{{"key", req.matches[1].str() + "/" + req.matches[2].str() + "/" +
                                       req.matches[3].str()},
                           {"kind", "fact"}};
                 if (req.has_param("mode")) args["mode"] = req.get_param_value("mode");
                 handle("get", std::move(args), res);
               });
  server_->Get(R"(/v1/desires/([^/]+)/([^/]+)/([^/]+))",
               [=, this](const httplib::Request& req, httplib::Response& res) {
                 json args{{"key", req.matches[1].str() + "/" + req.matches[2].str() + "/" +
                                       req.matches[3].str()},
                           {"kind", "desire"}};
                 handle("get", std::move(args), res);
               });
  server_->Put("/v1/desires", [=, this](const httplib::Request& req, httplib::Response& res) {
    handle("put_desire", body_args(req), res);
  });
  server_->Get(R"(/v1/diff/([^/]+))",
               [=, this](const httplib::Request& req, httplib::Response& res) {
                 handle("diff", json{{"entity", req.matches[1].str()}}, res);
               });
  server_->Post("/v1/orchestrate/rollout",
                [=, this](const httplib::Request& req, httplib::Response& res) {
                  handle("rollout", body_args(req), res);
                });
  server_->Get(R"(/v1/orchestrate/rollout/([^/]+))",
               [=, this](const httplib::Request& req, httplib::Response& res) {
                 handle("rollout_status", json{{"task", req.matches[1].str()}}, res);
               });
  server_->Post("/v1/orchestrate/sequence",
                [=, this](const httplib::Request& req, httplib::Response& res) {
                  handle("sequence", body_args(req), res);
                });
  server_->Post("/v1/remediate",
                [=, this](const httplib::Request& req, httplib::Response& res) {
                  handle("remediate", body_args(req), res);
                });
  server_->Post("/v1/flows", [=, this](const httplib::Request& req, httplib::Response& res) {
    handle("flows_add", body_args(req), res);
  });
  server_->Get("/v1/metrics", [=, this](const httplib::Request&, httplib::Response& res) {
    handle("metrics", json::object(), res);
  });
  server_->Post("/v1/attest", [=, this](const httplib::Request& req, httplib::Response& res) {
    handle("attest", body_args(req), res);
  });
  server_->Post("/v1/sim/fault",
                [=, this](const httplib::Request& req, httplib::Response& res) {
                  handle("sim_fault", body_args(req), res);
                });
  server_->Post("/v1/sim/run", [=, this](const httplib::Request& req, httplib::Response& res) {
    handle("sim_run", body_args(req), res);
  });
  server_->Post("/v1/config/apply",
                [=, this](const httplib::Request& req, httplib::Response& res) {
                  handle("config_apply", body_args(req), res);
                });
}

Result<void> GatewayServer::start() {
  server_ = std::make_unique<httplib::Server>();
  install_routes();

  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
    if (port_ <= 0) return Error{Errc::IoError, "could not bind a port"};
  } else {
    if (!server_->bind_to_port(options_.host, options_.port)) {
      return Error{Errc::IoError,
                   "could not bind " + options_.host + ":" + std::to_string(options_.port)};
    }
    port_ = options_.port;
  }

  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();

  if (options_.publish) {
    EndpointDirectory directory(store_, options_.cluster);
    auto set = directory.current();
    Endpoint self{options_.host, port_};
    if (std::find(set.endpoints.begin(), set.endpoints.end(), self) == set.endpoints.end()) {
      set.endpoints.push_back(self);
    }
    auto published =
        EndpointDirectory::publish(store_, options_.cluster, set.endpoints, options_.publish_owner);
    if (!published.ok()) return published;
  }
  return {};
}

void GatewayServer::stop() {
  if (server_ != nullptr) server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
}

}  // namespace fleet::gw
