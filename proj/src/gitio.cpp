#include "builddiff/gitio.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

namespace builddiff {

namespace {

void set_nonblocking(int fd) {
    int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (pipe(fds) != 0) throw Error("pipe() failed");
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
};

} // namespace

CommandResult run_command(const std::vector<std::string>& argv, const std::string& stdin_data) {
    if (argv.empty()) throw Error("run_command: empty argv");
    signal(SIGPIPE, SIG_IGN); // a dying child must not kill us mid-write

    Pipe in, out, err;
    pid_t pid = fork();
    if (pid < 0) throw Error("fork() failed");

    if (pid == 0) {
        dup2(in.fds[0], STDIN_FILENO);
        dup2(out.fds[1], STDOUT_FILENO);
        dup2(err.fds[1], STDERR_FILENO);
        in.close_read();
        in.close_write();
        out.close_read();
        out.close_write();
        err.close_read();
        err.close_write();
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }

    in.close_read();
    out.close_write();
    err.close_write();
    set_nonblocking(in.fds[1]);
    set_nonblocking(out.fds[0]);
    set_nonblocking(err.fds[0]);

    CommandResult result;
    size_t written = 0;
    bool stdin_open = true;
    if (stdin_data.empty()) {
        in.close_write();
        stdin_open = false;
    }
    bool out_open = true, err_open = true;
    char buf[65536];

    while (stdin_open || out_open || err_open) {
        struct pollfd fds[3];
        nfds_t n = 0;
        int idx_in = -1, idx_out = -1, idx_err = -1;
        if (stdin_open) {
            idx_in = n;
            fds[n++] = {in.fds[1], POLLOUT, 0};
        }
        if (out_open) {
            idx_out = n;
            fds[n++] = {out.fds[0], POLLIN, 0};
        }
        if (err_open) {
            idx_err = n;
            fds[n++] = {err.fds[0], POLLIN, 0};
        }
        if (poll(fds, n, -1) < 0) {
            if (errno == EINTR) continue;
            throw Error("poll() failed");
        }
        if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
            ssize_t w = write(in.fds[1], stdin_data.data() + written,
                              stdin_data.size() - written);
            if (w > 0) written += static_cast<size_t>(w);
            if (w < 0 && errno != EAGAIN && errno != EINTR) {
                stdin_open = false; // child closed its end
                in.close_write();
            } else if (written == stdin_data.size()) {
                stdin_open = false;
                in.close_write();
            }
        }
        auto drain = [&buf](int fd, std::string& dst, bool& open_flag) {
            for (;;) {
                ssize_t r = read(fd, buf, sizeof buf);
                if (r > 0) {
                    dst.append(buf, static_cast<size_t>(r));
                } else if (r == 0) {
                    open_flag = false;
                    return;
                } else {
                    if (errno == EAGAIN || errno == EINTR) return;
                    open_flag = false;
                    return;
                }
            }
        };
        if (idx_out >= 0 && (fds[idx_out].revents & (POLLIN | POLLHUP | POLLERR)))
            drain(out.fds[0], result.out, out_open);
        if (idx_err >= 0 && (fds[idx_err].revents & (POLLIN | POLLHUP | POLLERR)))
            drain(err.fds[0], result.err, err_open);
    }

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

bool is_pom_path(const std::string& path) {
    auto slash = path.rfind('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    return base == "pom.xml";
}

GitRepo::GitRepo(std::string repo_path) : path_(std::move(repo_path)) {
    CommandResult r = run_command({"git", "-C", path_, "rev-parse", "--git-dir"});
    if (r.status != 0)
        throw NotARepository("not a git repository: " + path_);
}

std::string GitRepo::git(const std::vector<std::string>& args, const std::string& stdin_data) const {
    std::vector<std::string> argv = {"git", "-C", path_};
    argv.insert(argv.end(), args.begin(), args.end());
    CommandResult r = run_command(argv, stdin_data);
    if (r.status != 0)
        throw Error("git " + args[0] + " failed (" + std::to_string(r.status) + "): " + r.err);
    return std::move(r.out);
}

std::vector<CommitInfo> GitRepo::commits_topological(bool committer_time) const {
    std::string out = git({"rev-list", "--all", "--topo-order", "--reverse",
                           committer_time ? "--format=%H|%P|%ct" : "--format=%H|%P|%at"});
    std::vector<CommitInfo> commits;
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("commit ", 0) == 0 || line.empty()) continue;
        auto p1 = line.find('|');
        auto p2 = line.find('|', p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos) continue;
        CommitInfo c;
        c.hash = line.substr(0, p1);
        std::istringstream ps(line.substr(p1 + 1, p2 - p1 - 1));
        std::string parent;
        while (ps >> parent) c.parents.push_back(parent);
        c.author_time = std::stoll(line.substr(p2 + 1));
        commits.push_back(std::move(c));
    }
    return commits;
}

std::vector<PomChange> GitRepo::modified_poms(const std::string& commit,
                                              const std::string& parent) const {
    std::string out = git({"diff-tree", "-r", "--no-renames", parent, commit});
    std::vector<PomChange> changes;
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line)) {
        // :100644 100644 <old> <new> M\tpath
        if (line.empty() || line[0] != ':') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        std::istringstream head(line.substr(1, tab - 1));
        std::string old_mode, new_mode, old_sha, new_sha, status;
        head >> old_mode >> new_mode >> old_sha >> new_sha >> status;
        std::string path = line.substr(tab + 1);
        if (status != "M" || !is_pom_path(path)) continue;
        changes.push_back({path, old_sha, new_sha});
    }
    return changes;
}

std::vector<PomEntry> GitRepo::tracked_poms(const std::string& commit) const {
    std::string out = git({"ls-tree", "-r", commit});
    std::vector<PomEntry> entries;
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line)) {
        // 100644 blob <sha>\tpath
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        std::istringstream head(line.substr(0, tab));
        std::string mode, type, sha;
        head >> mode >> type >> sha;
        std::string path = line.substr(tab + 1);
        if (type != "blob" || !is_pom_path(path)) continue;
        entries.push_back({path, sha});
    }
    return entries;
}

std::vector<std::string> GitRepo::read_blobs(const std::vector<std::string>& shas) const {
    if (shas.empty()) return {};
    std::string request;
    for (const auto& s : shas) {
        request += s;
        request += '\n';
    }
    std::string out = git({"cat-file", "--batch"}, request);
    std::vector<std::string> blobs;
    size_t pos = 0;
    for (size_t i = 0; i < shas.size(); ++i) {
        auto nl = out.find('\n', pos);
        if (nl == std::string::npos) throw Error("cat-file --batch: truncated output");
        std::istringstream head(out.substr(pos, nl - pos));
        std::string sha, type;
        size_t size = 0;
        head >> sha >> type >> size;
        if (type == "missing") throw Error("cat-file --batch: missing object " + sha);
        pos = nl + 1;
        if (pos + size > out.size()) throw Error("cat-file --batch: truncated blob");
        blobs.push_back(out.substr(pos, size));
        pos += size + 1; // trailing newline after each object
    }
    return blobs;
}

size_t GitRepo::commit_count() const {
    std::string out = git({"rev-list", "--all", "--count"});
    return static_cast<size_t>(std::stoull(out));
}

} // namespace builddiff
