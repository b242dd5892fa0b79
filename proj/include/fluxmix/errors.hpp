#pragma once

#include <stdexcept>
#include <string>

namespace fluxmix {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error record.
class error : public std::runtime_error
{
public:
    error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind))
    {
    }

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct invalid_argument_error : error
{
    explicit invalid_argument_error(const std::string& what)
        : error("invalid_argument", what)
    {
    }
};

struct truncation_error : error
{
    explicit truncation_error(const std::string& what)
        : error("truncation", what)
    {
    }
};

struct basis_mismatch_error : error
{
    explicit basis_mismatch_error(const std::string& what)
        : error("basis_mismatch", what)
    {
    }
};

struct bracket_error : error
{
    explicit bracket_error(const std::string& what) : error("bracket", what) {}
};

struct integration_error : error
{
    explicit integration_error(const std::string& what)
        : error("integration", what)
    {
    }
};

/// Configuration problems carry the JSON key path they refer to.
class config_error : public error
{
public:
    config_error(std::string key_path, const std::string& what)
        : error("config", key_path.empty() ? what : key_path + ": " + what),
          key_path_(std::move(key_path))
    {
    }

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

} // namespace fluxmix
