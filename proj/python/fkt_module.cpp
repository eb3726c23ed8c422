#include <pybind11/pybind11.h>
PYBIND11_MODULE(_fkt, m) { m.doc() = "fast kernel transform"; }
