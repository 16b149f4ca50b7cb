#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "tgnn/errors.hpp"

namespace tgnn {

// Network failure that survived every retry, or a non-retryable HTTP status.
class FetchError : public DataError {
 public:
  using DataError::DataError;
};

// The server answered 404.
class NotFoundError : public FetchError {
 public:
  using FetchError::FetchError;
};

// A cached file no longer matches the hash it is stored under. The corrupt
// entry is removed before this is thrown, so the next fetch downloads again.
class IntegrityError : public FetchError {
 public:
  using FetchError::FetchError;
};

struct FetchOptions {
  std::size_t retries = 3;
  std::chrono::milliseconds backoff{200};  // doubled after every failed attempt
  std::chrono::seconds timeout{30};
};

// $TGNN_CACHE_DIR, else $XDG_CACHE_HOME/tgnn, else $HOME/.cache/tgnn, else .tgnn-cache.
std::string default_cache_dir();

bool is_url(const std::string& text);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

// Downloads url into <cache_dir>/<sha256 of content>.json and returns that
// path. A URL already in the cache is served without any network traffic after
// its content hash is verified.
std::string fetch_dataset(const std::string& url, const std::string& cache_dir,
                          const FetchOptions& options = {});

}  // namespace tgnn
