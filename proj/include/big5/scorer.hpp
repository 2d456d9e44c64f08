#pragma once

// Pluggable text-similarity scorers. The external scorer talks to a child
// process, one request per line:
//   request:  <bytes_a>:<text_a><bytes_b>:<text_b>\n
//   response: <decimal score>\n

#include <csignal>
#include <cstdio>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "big5/errors.hpp"
#include "big5/stats.hpp"

namespace big5 {

class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double similarity(std::string_view a, std::string_view b) = 0;
  virtual std::string name() const = 0;
};

class TfCosineScorer : public SimilarityScorer {
 public:
  double similarity(std::string_view a, std::string_view b) override { return tf_cosine(a, b); }
  std::string name() const override { return "tf_cosine"; }
};

inline std::string encode_scorer_request(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(a.size() + b.size() + 24);
  out += std::to_string(a.size());
  out += ':';
  out += a;
  out += std::to_string(b.size());
  out += ':';
  out += b;
  out += '\n';
  return out;
}

class ExternalProcessScorer : public SimilarityScorer {
 public:
  explicit ExternalProcessScorer(std::vector<std::string> argv, std::string label = "external")
      : argv_(std::move(argv)), label_(std::move(label)) {
    if (argv_.empty()) throw ConfigError("external scorer needs a command");
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) throw ConfigError("cannot create scorer pipes");
    pid_ = fork();
    if (pid_ < 0) throw ConfigError("cannot fork scorer process");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char*> args;
      for (auto& a : argv_) args.push_back(a.data());
      args.push_back(nullptr);
      execvp(args[0], args.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    to_ = fdopen(to_child[1], "w");
    from_ = fdopen(from_child[0], "r");
    std::signal(SIGPIPE, SIG_IGN);
  }

  ExternalProcessScorer(const ExternalProcessScorer&) = delete;
  ExternalProcessScorer& operator=(const ExternalProcessScorer&) = delete;

  ~ExternalProcessScorer() override {
    if (to_) fclose(to_);
    if (from_) fclose(from_);
    if (pid_ > 0) waitpid(pid_, nullptr, 0);
  }

  double similarity(std::string_view a, std::string_view b) override {
    std::lock_guard lock(mutex_);
    const auto req = encode_scorer_request(a, b);
    if (fwrite(req.data(), 1, req.size(), to_) != req.size() || fflush(to_) != 0)
      throw TransportError("external scorer closed its input", false);
    std::string line;
    for (int c; (c = fgetc(from_)) != EOF && c != '\n';) line += static_cast<char>(c);
    if (line.empty()) throw ProtocolError("external scorer returned no score");
    try {
      std::size_t used = 0;
      const double v = std::stod(line, &used);
      if (used != line.size() && line.find_first_not_of(" \r", used) != std::string::npos)
        throw ProtocolError("external scorer returned '" + line + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ProtocolError("external scorer returned '" + line + "'");
    }
  }

  std::string name() const override { return label_; }

 private:
  std::vector<std::string> argv_;
  std::string label_;
  pid_t pid_ = -1;
  FILE* to_ = nullptr;
  FILE* from_ = nullptr;
  std::mutex mutex_;
};

}  // namespace big5
