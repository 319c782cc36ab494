// include/latrescore/logging.h
// Copyright 2026  The latrescore Authors
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

#ifndef LATRESCORE_LOGGING_H_
#define LATRESCORE_LOGGING_H_

namespace latrescore {

/// Sets the spdlog level from RESCORER_LOG (trace, debug, info, warn,
/// error, off); "warn" when unset. Logs go to stderr.
void init_logging();

}  // namespace latrescore

#endif  // LATRESCORE_LOGGING_H_
