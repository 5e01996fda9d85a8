// src/synth.cc

// Copyright 2026 The anchoralign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "anchoralign/synth.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "anchoralign/error.h"

namespace anchoralign {

namespace fs = std::filesystem;

namespace {

std::size_t CountOccurrences(const std::string &s, const std::string &needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos;
       p = s.find(needle, p + needle.size()))
    ++n;
  return n;
}

void ReplaceAll(std::string &s, const std::string &from, const std::string &to) {
  for (std::size_t p = s.find(from); p != std::string::npos;
       p = s.find(from, p + to.size()))
    s.replace(p, from.size(), to);
}

// Removes a scratch directory on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "anchoralign-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr)
      throw IoError("cannot create temporary directory");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;
  const fs::path &path() const { return path_; }

 private:
  fs::path path_;
};

AudioBuffer TestSynthesis(const std::string &text) {
  const int sr = kPipelineRate;
  const std::size_t tone = static_cast<std::size_t>(std::llround(kTestToneSeconds * sr));
  const std::size_t ramp = static_cast<std::size_t>(std::llround(kTestRampSeconds * sr));
  std::u32string cps = Utf8ToCodepoints(text);
  std::vector<float> out;
  out.reserve(cps.size() * tone);
  for (char32_t c : cps) {
    const double w = 2.0 * std::numbers::pi * TestToneHz(c) / sr;
    for (std::size_t n = 0; n < tone; ++n) {
      double g = 1.0;
      if (n < ramp)
        g = 0.5 * (1.0 - std::cos(std::numbers::pi * n / ramp));
      else if (n >= tone - ramp)
        g = 0.5 * (1.0 - std::cos(std::numbers::pi * (tone - 1 - n) / ramp));
      out.push_back(static_cast<float>(kTestToneAmplitude * g * std::sin(w * n)));
    }
  }
  return AudioBuffer(std::move(out), sr);
}

AudioBuffer ExternalSynthesis(const std::string &text, const SynthBackend &b) {
  ScratchDir dir;
  const fs::path text_file = dir.path() / "fragment.txt";
  const fs::path out_wav = dir.path() / "fragment.wav";
  {
    std::ofstream out(text_file, std::ios::binary);
    out << text << '\n';
    if (!out) throw IoError("cannot write " + text_file.string());
  }
  std::string cmd = b.command_template;
  ReplaceAll(cmd, "{text_file}", ShellQuote(text_file.string()));
  ReplaceAll(cmd, "{out_wav}", ShellQuote(out_wav.string()));
  ReplaceAll(cmd, "{voice}", ShellQuote(b.voice));

  CommandResult r = RunCommand(cmd, b.timeout_s);
  if (r.timed_out)
    throw BackendError("TTS command timed out after " +
                           std::to_string(b.timeout_s) + " s: " + cmd,
                       r.stderr_text);
  if (r.exit_code != 0)
    throw BackendError("TTS command exited with status " +
                           std::to_string(r.exit_code) + ": " + cmd,
                       r.stderr_text);
  AudioBuffer audio;
  try {
    audio = ReadWav(out_wav.string());
  } catch (const Error &e) {
    throw BackendError(std::string("TTS output unreadable: ") + e.what(),
                       r.stderr_text);
  }
  return Resample(audio, kPipelineRate);
}

}  // namespace

SynthBackend SynthBackend::External(std::string command, std::string voice,
                                    double timeout_s) {
  SynthBackend b;
  b.kind = Kind::kExternal;
  b.command_template = std::move(command);
  b.voice = std::move(voice);
  b.timeout_s = timeout_s;
  b.Validate();
  return b;
}

void SynthBackend::Validate() const {
  if (kind != Kind::kExternal) return;
  for (const char *ph : {"{text_file}", "{out_wav}"}) {
    std::size_t n = CountOccurrences(command_template, ph);
    if (n != 1)
      throw ConfigError(std::string("TTS command template must contain ") + ph +
                        " exactly once (found " + std::to_string(n) + ")");
  }
  if (!(timeout_s > 0.0)) throw ConfigError("TTS timeout must be positive");
}

double TestToneHz(char32_t codepoint) {
  return 200.0 + static_cast<double>(codepoint % 64) * 25.0;
}

std::string ShellQuote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

CommandResult RunCommand(const std::string &command, double timeout_s) {
  char err_tmpl[] = "/tmp/anchoralign-stderr-XXXXXX";
  int err_fd = mkstemp(err_tmpl);
  if (err_fd < 0) throw IoError("cannot create stderr capture file");
  unlink(err_tmpl);

  pid_t pid = fork();
  if (pid < 0) {
    close(err_fd);
    throw BackendError("fork failed", "");
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(err_fd, STDERR_FILENO);
    int devnull = open("/dev/null", O_RDWR);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      dup2(devnull, STDOUT_FILENO);
    }
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }

  CommandResult result;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_s);
  int status = 0;
  for (;;) {
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0) {
      status = -1;
      break;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (!result.timed_out && status >= 0 && WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);

  lseek(err_fd, 0, SEEK_SET);
  char chunk[4096];
  ssize_t got;
  while ((got = read(err_fd, chunk, sizeof chunk)) > 0 &&
         result.stderr_text.size() < (1u << 16))
    result.stderr_text.append(chunk, static_cast<std::size_t>(got));
  close(err_fd);
  return result;
}

AudioBuffer SynthesizeFragment(const std::string &text,
                               const SynthBackend &backend) {
  if (text.empty()) throw DomainError("cannot synthesize empty text");
  if (backend.kind == SynthBackend::Kind::kTest) return TestSynthesis(text);
  backend.Validate();
  return ExternalSynthesis(text, backend);
}

AnchoredSynthesis SynthesizeSequence(const std::vector<TextFragment> &fragments,
                                     const SynthBackend &backend,
                                     std::size_t workers) {
  if (fragments.empty()) throw DomainError("no fragments to synthesize");
  std::vector<AudioBuffer> parts(fragments.size());
  auto run_one = [&](std::size_t k) {
    try {
      parts[k] = SynthesizeFragment(fragments[k].text, backend);
    } catch (const BackendError &e) {
      throw BackendError("fragment " + std::to_string(fragments[k].index) +
                             ": " + e.what(),
                         e.diagnostics());
    } catch (const Error &e) {
      throw Error("fragment " + std::to_string(fragments[k].index) + ": " +
                  e.what());
    }
  };
  if (workers <= 1 || fragments.size() == 1) {
    for (std::size_t k = 0; k < fragments.size(); ++k) run_one(k);
  } else {
    // Strided assignment; each worker writes only its own slots.
    std::vector<std::future<void>> jobs;
    std::size_t n = std::min(workers, fragments.size());
    for (std::size_t w = 0; w < n; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < fragments.size(); k += n) run_one(k);
      }));
    }
    for (auto &j : jobs) j.get();
  }

  AnchoredSynthesis out;
  out.audio = AudioBuffer({}, kPipelineRate);
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < fragments.size(); ++k) {
    Anchor a;
    a.fragment_index = fragments[k].index;
    a.start_s = static_cast<double>(cursor) / kPipelineRate;
    cursor += parts[k].size();
    a.end_s = static_cast<double>(cursor) / kPipelineRate;
    out.anchors.push_back(a);
    out.audio.Append(parts[k]);
  }
  return out;
}

}  // namespace anchoralign
