#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>

#include "hicu/denoise.hpp"
#include "hicu/error.hpp"
#include "hicu/frame.hpp"

namespace hicu {

namespace {

using Clock = std::chrono::steady_clock;

bool is_executable(const std::string& path) {
  struct stat st {};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

// First word of the command must name an executable file, directly or via PATH.
bool resolvable(const std::string& command) {
  std::istringstream words(command);
  std::string program;
  words >> program;
  if (program.empty()) return false;
  if (program.find('/') != std::string::npos) return is_executable(program);
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (is_executable((dir.empty() ? std::string(".") : dir) + "/" + program)) return true;
  }
  return false;
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return static_cast<int>(std::max<long long>(0, left.count()));
}

}  // namespace

ExternalDenoiser::ExternalDenoiser(ExternalOptions opts) : opts_(std::move(opts)) {
  if (!resolvable(opts_.command)) {
    throw DenoiserError("external denoiser command not found: '" + opts_.command + "'");
  }
  // A child that dies early must surface as an error, not kill us.
  struct sigaction ignore {};
  ignore.sa_handler = SIG_IGN;
  ::sigaction(SIGPIPE, &ignore, nullptr);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw DenoiserError("pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw DenoiserError("pipe failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw DenoiserError("fork failed");
  }
  if (pid == 0) {
    // Own process group, so a shell wrapper and whatever it spawned can be
    // killed together.
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", opts_.command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::setpgid(pid, pid);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFL, ::fcntl(to_child_, F_GETFL) | O_NONBLOCK);
  ::fcntl(from_child_, F_SETFL, ::fcntl(from_child_, F_GETFL) | O_NONBLOCK);
}

ExternalDenoiser::~ExternalDenoiser() { shutdown(); }

void ExternalDenoiser::shutdown() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    // Give the child a moment to exit on EOF, then make sure it is gone.
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        ::kill(-pid_, SIGKILL);
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(-pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void ExternalDenoiser::write_all(std::span<const std::uint8_t> bytes) {
  const auto deadline = Clock::now() + opts_.timeout;
  std::size_t done = 0;
  while (done < bytes.size()) {
    pollfd pfd{to_child_, POLLOUT, 0};
    const int ready = ::poll(&pfd, 1, remaining_ms(deadline));
    if (ready == 0) throw DenoiserError("timed out writing to external denoiser");
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw DenoiserError(std::string("poll failed: ") + std::strerror(errno));
    }
    const ssize_t n = ::write(to_child_, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      throw DenoiserError("external denoiser closed its input (" + std::string(std::strerror(errno)) +
                          ")");
    }
    done += static_cast<std::size_t>(n);
  }
}

void ExternalDenoiser::read_exact(std::span<std::uint8_t> bytes) {
  const auto deadline = Clock::now() + opts_.timeout;
  std::size_t done = 0;
  while (done < bytes.size()) {
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, remaining_ms(deadline));
    if (ready == 0) throw DenoiserError("timed out waiting for external denoiser");
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw DenoiserError(std::string("poll failed: ") + std::strerror(errno));
    }
    const ssize_t n = ::read(from_child_, bytes.data() + done, bytes.size() - done);
    if (n == 0) throw DenoiserError("external denoiser exited before sending a full response");
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      throw DenoiserError(std::string("read failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

void ExternalDenoiser::denoise_images(MultiCoilKSpace& images, const DenoiseContext&) {
  if (pid_ < 0) throw DenoiserError("external denoiser is not running");
  write_all(frame::encode_complex(frame::kDenoiserMagic, images));

  std::vector<std::uint8_t> header(frame::kComplexHeaderBytes);
  read_exact(header);
  frame::ComplexHeader h;
  try {
    h = frame::decode_complex_header(frame::kDenoiserMagic, header);
  } catch (const Error& e) {
    throw DenoiserError(std::string("protocol violation in response header: ") + e.what());
  }
  if (static_cast<int>(h.nx) != images.nx() || static_cast<int>(h.ny) != images.ny() ||
      static_cast<int>(h.nc) != images.nc()) {
    throw DenoiserError("external denoiser answered with different extents");
  }
  std::vector<std::uint8_t> payload(frame::payload_bytes(h));
  read_exact(payload);
  images = frame::decode_payload(h, payload);
}

}  // namespace hicu
