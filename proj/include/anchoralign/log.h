// include/anchoralign/log.h

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

#ifndef ANCHORALIGN_LOG_H_
#define ANCHORALIGN_LOG_H_

#include <string>

#include "json.hpp"

namespace anchoralign {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kOff = 4 };

void SetLogLevel(LogLevel level);
LogLevel ParseLogLevel(const std::string &name);

/// One JSON object per line on stderr: {"level":..,"event":..,<fields>}.
/// Safe to call from worker threads.
void Log(LogLevel level, const std::string &event,
         nlohmann::ordered_json fields = nlohmann::ordered_json::object());

}  // namespace anchoralign

#endif  // ANCHORALIGN_LOG_H_
