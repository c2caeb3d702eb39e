/*   Copyright 2026 The fuzzykb Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */
#pragma once

#include <memory>
#include <utility>

namespace fuzzy {

/// Heap-allocated value with deep copy and value comparison. Lets recursive
/// variants (expression trees) keep ordinary value semantics.
template <class T>
class boxed {
public:
    boxed(T value) : ptr_(std::make_unique<T>(std::move(value))) {}

    boxed(const boxed& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    boxed(boxed&&) noexcept = default;

    boxed& operator=(const boxed& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    boxed& operator=(boxed&&) noexcept = default;

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }
    T& operator*() { return *ptr_; }
    T* operator->() { return ptr_.get(); }

    friend bool operator==(const boxed& a, const boxed& b) { return *a.ptr_ == *b.ptr_; }

private:
    // never null except after move
    std::unique_ptr<T> ptr_;
};

}  // namespace fuzzy
