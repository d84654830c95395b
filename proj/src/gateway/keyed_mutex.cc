// Copyright 2026 The RSAM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rsam/gateway/keyed_mutex.h"

namespace rsam::gateway {

KeyedMutex::Guard KeyedMutex::lock(const std::string& key) {
  Entry* entry = nullptr;
  {
    std::lock_guard lock(mu_);
    auto& slot = entries_[key];
    if (!slot) slot = std::make_unique<Entry>();
    entry = slot.get();
    ++entry->users;
  }
  entry->mutex.lock();
  return Guard(this, key, entry);
}

bool KeyedMutex::busy(const std::string& key) const {
  std::lock_guard lock(mu_);
  return entries_.count(key) != 0;
}

void KeyedMutex::release(const std::string& key, Entry* entry) {
  entry->mutex.unlock();
  std::lock_guard lock(mu_);
  if (--entry->users == 0) entries_.erase(key);
}

}  // namespace rsam::gateway
