// include/anchoralign/fileutil.h

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

#ifndef ANCHORALIGN_FILEUTIL_H_
#define ANCHORALIGN_FILEUTIL_H_

#include <fstream>
#include <string>
#include <string_view>

namespace anchoralign {

// Output file that only appears under its final name after Commit().
// An uncommitted file is removed on destruction.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path);
  ~AtomicFile();
  AtomicFile(const AtomicFile &) = delete;
  AtomicFile &operator=(const AtomicFile &) = delete;

  std::ostream &stream() { return out_; }
  void Commit();  // throws IoError

 private:
  std::string path_, tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string ReadFile(const std::string &path);  // throws IoError

// RFC 4180 quoting when the field needs it.
std::string CsvField(std::string_view s);

// printf-style "%.<digits>f".
std::string Fixed(double v, int digits);

}  // namespace anchoralign

#endif  // ANCHORALIGN_FILEUTIL_H_
