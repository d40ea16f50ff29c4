#pragma once

#include <stdexcept>
#include <string>

namespace scot {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed graph input: self-loops, unknown endpoints, empty operands,
// disconnected graphs where connectivity is required.
class GraphError : public Error {
public:
    using Error::Error;
};

class TopologyError : public Error {
public:
    using Error::Error;
};

class AcyclicPropertyViolation : public TopologyError {
public:
    using TopologyError::TopologyError;
};

class ConnectivityPropertyViolation : public TopologyError {
public:
    using TopologyError::TopologyError;
};

class IndexPropertyViolation : public TopologyError {
public:
    using TopologyError::TopologyError;
};

class UnknownBroker : public TopologyError {
public:
    using TopologyError::TopologyError;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Routing state that cannot arise from a correct run (duplicate clustered
// subscription, BID without an entry, own-cluster CBV_p bit).
class ProtocolViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

}  // namespace scot
