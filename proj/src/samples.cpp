#include "scot/samples.hpp"

namespace scot::samples {

Graph h_tree() {
    return make_tree({{"a", "b"}, {"b", "c"}, {"b", "e"}, {"d", "e"}, {"e", "f"}});
}

Graph path_abc() { return make_tree({{"a", "b"}, {"b", "c"}}); }

Graph roman_tree() {
    return make_tree({{"i", "vi"},
                      {"vi", "vii"},
                      {"vii", "viii"},
                      {"viii", "ix"},
                      {"ix", "x"},
                      {"vii", "xii"},
                      {"vi", "xi"},
                      {"viii", "xiii"},
                      {"ix", "xiv"},
                      {"x", "xv"},
                      {"ii", "vii"},
                      {"iii", "viii"},
                      {"iv", "ix"},
                      {"v", "x"}});
}

}  // namespace scot::samples
