#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "tgnn/data/fetch.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace tgnn {

namespace fs = std::filesystem;

namespace {

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v != nullptr ? std::string(v) : std::string();
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FetchError("cannot read cache file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Write to a unique sibling, then rename over the target.
void write_atomic(const fs::path& path, const std::string& bytes) {
  static std::atomic<std::uint64_t> counter{0};
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(counter.fetch_add(1)) + "." +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FetchError("cannot write cache file '" + tmp.string() + "'");
    out << bytes;
    if (!out.flush()) throw FetchError("failed writing cache file '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw FetchError("cannot move cache file into place at '" + path.string() + "'");
  }
}

std::mutex& key_mutex(const std::string& key) {
  static std::mutex guard;
  static std::map<std::string, std::unique_ptr<std::mutex>> locks;
  std::lock_guard lock(guard);
  auto& slot = locks[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || !is_url(url)) {
    throw ConfigError("not an http(s) URL: '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (out.origin.size() <= scheme_end + 3) throw ConfigError("URL has no host: '" + url + "'");
  return out;
}

std::string download(const std::string& url, const FetchOptions& options) {
  const ParsedUrl parts = split_url(url);
  std::string last_error;
  auto delay = options.backoff;
  for (std::size_t attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    httplib::Client client(parts.origin);
    client.set_follow_location(true);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    auto res = client.Get(parts.path);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    if (res->status == 404) throw NotFoundError("not found (HTTP 404): " + url);
    last_error = "HTTP " + std::to_string(res->status);
    if (res->status < 500 && res->status != 429) break;
  }
  throw FetchError("cannot fetch " + url + ": " + last_error);
}

}  // namespace

std::string default_cache_dir() {
  if (auto dir = env("TGNN_CACHE_DIR"); !dir.empty()) return dir;
  if (auto dir = env("XDG_CACHE_HOME"); !dir.empty()) return (fs::path(dir) / "tgnn").string();
  if (auto home = env("HOME"); !home.empty()) {
    return (fs::path(home) / ".cache" / "tgnn").string();
  }
  return ".tgnn-cache";
}

bool is_url(const std::string& text) {
  return text.rfind("http://", 0) == 0 || text.rfind("https://", 0) == 0;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string fetch_dataset(const std::string& url, const std::string& cache_dir,
                          const FetchOptions& options) {
  split_url(url);
  const fs::path root(cache_dir);
  const fs::path index = root / "urls" / sha256_hex(url);

  std::lock_guard lock(key_mutex(index.string()));
  std::error_code ec;
  fs::create_directories(root / "urls", ec);
  if (ec) throw FetchError("cannot create cache directory '" + cache_dir + "': " + ec.message());

  if (fs::exists(index)) {
    const std::string hash = read_all(index);
    const fs::path cached = root / (hash + ".json");
    if (fs::exists(cached)) {
      if (sha256_hex(read_all(cached)) == hash) return cached.string();
      fs::remove(cached, ec);
      fs::remove(index, ec);
      throw IntegrityError("cached copy of " + url + " does not match its SHA-256 " + hash +
                           "; removed it, fetch again to re-download");
    }
  }

  const std::string body = download(url, options);
  const std::string hash = sha256_hex(body);
  const fs::path target = root / (hash + ".json");
  write_atomic(target, body);
  write_atomic(index, hash);
  return target.string();
}

}  // namespace tgnn
