// sched-service: HTTP front end. Every route except /health needs
// "Authorization: Bearer <token>".
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "roster/error.h"
#include "service.h"

int main(int argc, char** argv) {
  CLI::App app{"Nurse roster HTTP service"};
  roster::service::ServiceConfig config;
  std::string host = "127.0.0.1";
  int port = 8080;
  config.data_dir = "data";
  app.add_option("--data", config.data_dir, "Directory holding pools/ and jobs/");
  app.add_option("--host", host, "Listen address");
  app.add_option("--port", port, "Listen port");
  app.add_option("--token", config.token, "Bearer token (default: $ROSTER_TOKEN)");
  app.add_option("--workers", config.workers, "Concurrent generation jobs")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  if (config.token.empty()) {
    if (const char* env = std::getenv("ROSTER_TOKEN")) config.token = env;
  }
  if (config.token.empty()) {
    std::cerr << "a token is required (--token or ROSTER_TOKEN)\n";
    return 2;
  }
  try {
    roster::service::Service service(config);
    httplib::Server server;
    service.Install(server);
    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "cannot listen on " << host << ":" << port << "\n";
      return 1;
    }
  } catch (const roster::RosterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
