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

#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

namespace rsam::gateway {

// One mutex per string key, created on demand and dropped when the last
// holder or waiter leaves. Distinct keys never contend.
class KeyedMutex {
  struct Entry {
    std::mutex mutex;
    int users = 0;
  };

 public:
  class Guard {
   public:
    Guard(Guard&& other) noexcept
        : owner_(other.owner_), key_(std::move(other.key_)), entry_(other.entry_) {
      other.entry_ = nullptr;
    }
    Guard& operator=(Guard&&) = delete;
    ~Guard() {
      if (entry_ != nullptr) owner_->release(key_, entry_);
    }

   private:
    friend class KeyedMutex;
    Guard(KeyedMutex* owner, std::string key, Entry* entry)
        : owner_(owner), key_(std::move(key)), entry_(entry) {}

    KeyedMutex* owner_;
    std::string key_;
    Entry* entry_;
  };

  KeyedMutex() = default;
  KeyedMutex(const KeyedMutex&) = delete;
  KeyedMutex& operator=(const KeyedMutex&) = delete;

  [[nodiscard]] Guard lock(const std::string& key);

  // True while somebody holds or waits for `key`.
  bool busy(const std::string& key) const;

 private:
  void release(const std::string& key, Entry* entry);

  mutable std::mutex mu_;
  std::unordered_map<std::string, std::unique_ptr<Entry>> entries_;
};

}  // namespace rsam::gateway
