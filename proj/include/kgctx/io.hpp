// Copyright 2026 The kgctx Authors
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

#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <string>

#include "kgctx/errors.hpp"

#if defined(KGCTX_HAS_ZLIB)
#include <zlib.h>
#endif

namespace kgctx {

// Line-at-a-time reader so ingestion code does not care whether the dump is
// plain text or gzip-compressed.
class LineSource {
 public:
  virtual ~LineSource() = default;
  // Fills `line` (without the trailing newline) and returns true, or returns
  // false at end of input.
  virtual bool next(std::string& line) = 0;
};

class StreamLineSource final : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in) : in_(in) {}

  bool next(std::string& line) override {
    if (!std::getline(in_, line)) {
      if (in_.bad()) throw IoError("stream read failure");
      return false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

 private:
  std::istream& in_;
};

#if defined(KGCTX_HAS_ZLIB)
class GzipLineSource final : public LineSource {
 public:
  explicit GzipLineSource(const std::filesystem::path& path) {
    file_ = gzopen(path.string().c_str(), "rb");
    if (file_ == nullptr) throw IoError("cannot open gzip file: " + path.string());
  }

  ~GzipLineSource() override {
    if (file_ != nullptr) gzclose(file_);
  }

  GzipLineSource(const GzipLineSource&) = delete;
  GzipLineSource& operator=(const GzipLineSource&) = delete;

  bool next(std::string& line) override {
    line.clear();
    char buf[1 << 16];
    bool got_any = false;
    for (;;) {
      if (gzgets(file_, buf, sizeof(buf)) == nullptr) {
        int errnum = 0;
        const char* msg = gzerror(file_, &errnum);
        if (errnum != Z_OK && errnum != Z_STREAM_END)
          throw IoError(std::string("gzip read failure: ") + msg);
        return got_any;
      }
      got_any = true;
      line.append(buf);
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
      // Buffer filled without a newline: keep appending.
    }
  }

 private:
  gzFile file_ = nullptr;
};
#endif  // KGCTX_HAS_ZLIB

// Opens a dump file, selecting the gzip reader for a ".gz" suffix.
// The returned source keeps the underlying stream alive.
class FileLineSource final : public LineSource {
 public:
  explicit FileLineSource(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
    if (path.extension() == ".gz") {
#if defined(KGCTX_HAS_ZLIB)
      gz_ = std::make_unique<GzipLineSource>(path);
#else
      throw IoError("gzip input requires zlib, which this build lacks: " + path.string());
#endif
    } else {
      file_.open(path, std::ios::in | std::ios::binary);
      if (!file_.is_open()) throw IoError("cannot open file: " + path.string());
      plain_ = std::make_unique<StreamLineSource>(file_);
    }
  }

  bool next(std::string& line) override {
    return gz_ ? gz_->next(line) : plain_->next(line);
  }

 private:
  std::ifstream file_;
  std::unique_ptr<LineSource> plain_;
  std::unique_ptr<LineSource> gz_;
};

}  // namespace kgctx
