#ifndef ZKSTRIP_ERROR_HPP
#define ZKSTRIP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace zk {

enum class Errc {
    invalid_argument,
    config,
    solver,
    io,
    non_real_synthesis,
    internal
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace zk

#endif
