#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "intuition/detail/fetch.hpp"

#include <stdexcept>

namespace intuition::detail {

bool is_url(const std::string& source) {
    return source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0;
}

std::string fetch_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    auto res = client.Get(path);
    if (!res)
        throw std::runtime_error("fetching " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw std::runtime_error("fetching " + url + " returned HTTP " + std::to_string(res->status));
    return res->body;
}

} // namespace intuition::detail
