#pragma once

#include <stdexcept>
#include <string>

namespace qgr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// lambda >= mu*C: the M/M/1 queue has no steady state.
class UnstableQueueError : public Error {
 public:
  UnstableQueueError(double lambda, double mu_c, const std::string& where = "")
      : Error("unstable queue" + (where.empty() ? "" : " at " + where) +
              ": lambda=" + std::to_string(lambda) +
              " >= mu*C=" + std::to_string(mu_c)),
        lambda(lambda),
        mu_c(mu_c) {}
  double lambda;
  double mu_c;
};

/// Level-1 dropped every node of a region.
class RegionStarvationError : public Error {
 public:
  explicit RegionStarvationError(int region)
      : Error("region " + std::to_string(region) +
              " has no surviving nodes after level-1 selection"),
        region(region) {}
  int region;
};

class NoPathError : public Error {
 public:
  NoPathError(int source, int dest)
      : Error("no path from node " + std::to_string(source) + " to node " +
              std::to_string(dest)),
        source(source),
        dest(dest) {}
  int source;
  int dest;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, const std::string& path)
      : Error(what + ": " + path), path(path) {}
  std::string path;
};

}  // namespace qgr
