// Copyright 2026 The Sinkhole Authors
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

#include <random>
#include <string>

#include "sinkhole/dns/message.hpp"

namespace gen {

// Lowercase name of 1-5 labels drawn from the hostname alphabet.
std::string random_name(std::mt19937& rng);

// Valid message with one question and a mix of A, AAAA, CNAME, MX, TXT and
// unknown-type records across all three sections.
sinkhole::dns::DnsMessage random_message(std::mt19937& rng);

}  // namespace gen
