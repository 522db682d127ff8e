#include "tw/porter.hpp"

#include <cstring>

namespace tw {
namespace {

class PorterStemmer {
public:
    explicit PorterStemmer(std::string_view word) : b_(word), k_(static_cast<int>(word.size()) - 1) {}

    std::string run()
    {
        if (k_ <= 1) {
            return b_;
        }
        step1ab();
        if (k_ > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        b_.resize(static_cast<std::size_t>(k_ + 1));
        return b_;
    }

private:
    std::string b_;
    int k_;
    int j_ = 0;

    char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

    bool cons(int i) const
    {
        switch (at(i)) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !cons(i - 1);
        default:
            return true;
        }
    }

    // Number of consonant sequences between 0 and j_: <c><v> gives 0,
    // <c>vc<v> gives 1, <c>vcvc<v> gives 2, ...
    int m() const
    {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > j_) {
                return n;
            }
            if (!cons(i)) {
                break;
            }
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j_) {
                    return n;
                }
                if (cons(i)) {
                    break;
                }
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j_) {
                    return n;
                }
                if (!cons(i)) {
                    break;
                }
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const
    {
        for (int i = 0; i <= j_; ++i) {
            if (!cons(i)) {
                return true;
            }
        }
        return false;
    }

    bool double_consonant(int j) const
    {
        if (j < 1) {
            return false;
        }
        if (at(j) != at(j - 1)) {
            return false;
        }
        return cons(j);
    }

    // cvc(i) is true iff i-2,i-1,i has the form consonant-vowel-consonant
    // and the second c is not w, x or y.
    bool cvc(int i) const
    {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) {
            return false;
        }
        char ch = at(i);
        return !(ch == 'w' || ch == 'x' || ch == 'y');
    }

    bool ends(const char* s)
    {
        int length = static_cast<int>(std::strlen(s));
        if (s[length - 1] != at(k_)) {
            return false;
        }
        if (length > k_ + 1) {
            return false;
        }
        if (b_.compare(static_cast<std::size_t>(k_ - length + 1), static_cast<std::size_t>(length), s) != 0) {
            return false;
        }
        j_ = k_ - length;
        return true;
    }

    void set_to(const char* s)
    {
        int length = static_cast<int>(std::strlen(s));
        b_.replace(static_cast<std::size_t>(j_ + 1), std::string::npos, s);
        k_ = j_ + length;
    }

    void replace_if_measured(const char* s)
    {
        if (m() > 0) {
            set_to(s);
        }
    }

    // Plurals and -ed or -ing.
    void step1ab()
    {
        if (at(k_) == 's') {
            if (ends("sses")) {
                k_ -= 2;
            } else if (ends("ies")) {
                set_to("i");
            } else if (at(k_ - 1) != 's') {
                --k_;
            }
        }
        if (ends("eed")) {
            if (m() > 0) {
                --k_;
            }
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_consonant(k_)) {
                --k_;
                char ch = at(k_);
                if (ch == 'l' || ch == 's' || ch == 'z') {
                    ++k_;
                }
            } else if (m() == 1 && cvc(k_)) {
                set_to("e");
            }
        }
    }

    void step1c()
    {
        if (ends("y") && vowel_in_stem()) {
            b_[static_cast<std::size_t>(k_)] = 'i';
        }
    }

    // Double suffixes map to single ones when the stem has m() > 0.
    void step2()
    {
        switch (at(k_ - 1)) {
        case 'a':
            if (ends("ational")) { replace_if_measured("ate"); break; }
            if (ends("tional")) { replace_if_measured("tion"); break; }
            break;
        case 'c':
            if (ends("enci")) { replace_if_measured("ence"); break; }
            if (ends("anci")) { replace_if_measured("ance"); break; }
            break;
        case 'e':
            if (ends("izer")) { replace_if_measured("ize"); break; }
            break;
        case 'l':
            if (ends("bli")) { replace_if_measured("ble"); break; }
            if (ends("alli")) { replace_if_measured("al"); break; }
            if (ends("entli")) { replace_if_measured("ent"); break; }
            if (ends("eli")) { replace_if_measured("e"); break; }
            if (ends("ousli")) { replace_if_measured("ous"); break; }
            break;
        case 'o':
            if (ends("ization")) { replace_if_measured("ize"); break; }
            if (ends("ation")) { replace_if_measured("ate"); break; }
            if (ends("ator")) { replace_if_measured("ate"); break; }
            break;
        case 's':
            if (ends("alism")) { replace_if_measured("al"); break; }
            if (ends("iveness")) { replace_if_measured("ive"); break; }
            if (ends("fulness")) { replace_if_measured("ful"); break; }
            if (ends("ousness")) { replace_if_measured("ous"); break; }
            break;
        case 't':
            if (ends("aliti")) { replace_if_measured("al"); break; }
            if (ends("iviti")) { replace_if_measured("ive"); break; }
            if (ends("biliti")) { replace_if_measured("ble"); break; }
            break;
        case 'g':
            if (ends("logi")) { replace_if_measured("log"); break; }
            break;
        default:
            break;
        }
    }

    // -ic-, -full, -ness etc.
    void step3()
    {
        switch (at(k_)) {
        case 'e':
            if (ends("icate")) { replace_if_measured("ic"); break; }
            if (ends("ative")) { replace_if_measured(""); break; }
            if (ends("alize")) { replace_if_measured("al"); break; }
            break;
        case 'i':
            if (ends("iciti")) { replace_if_measured("ic"); break; }
            break;
        case 'l':
            if (ends("ical")) { replace_if_measured("ic"); break; }
            if (ends("ful")) { replace_if_measured(""); break; }
            break;
        case 's':
            if (ends("ness")) { replace_if_measured(""); break; }
            break;
        default:
            break;
        }
    }

    // Takes off -ant, -ence etc. in context <c>vcvc<v>.
    void step4()
    {
        switch (at(k_ - 1)) {
        case 'a':
            if (ends("al")) break;
            return;
        case 'c':
            if (ends("ance")) break;
            if (ends("ence")) break;
            return;
        case 'e':
            if (ends("er")) break;
            return;
        case 'i':
            if (ends("ic")) break;
            return;
        case 'l':
            if (ends("able")) break;
            if (ends("ible")) break;
            return;
        case 'n':
            if (ends("ant")) break;
            if (ends("ement")) break;
            if (ends("ment")) break;
            if (ends("ent")) break;
            return;
        case 'o':
            if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) break;
            if (ends("ou")) break;
            return;
        case 's':
            if (ends("ism")) break;
            return;
        case 't':
            if (ends("ate")) break;
            if (ends("iti")) break;
            return;
        case 'u':
            if (ends("ous")) break;
            return;
        case 'v':
            if (ends("ive")) break;
            return;
        case 'z':
            if (ends("ize")) break;
            return;
        default:
            return;
        }
        if (m() > 1) {
            k_ = j_;
        }
    }

    // Removes a final -e if m() > 1, and changes -ll to -l if m() > 1.
    void step5()
    {
        j_ = k_;
        if (at(k_) == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) {
                --k_;
            }
        }
        if (at(k_) == 'l' && double_consonant(k_) && m() > 1) {
            --k_;
        }
    }
};

}  // namespace

std::string porter_stem(std::string_view word)
{
    if (word.size() <= 2) {
        return std::string(word);
    }
    for (char c : word) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x21 || u > 0x7e) {
            return std::string(word);
        }
    }
    return PorterStemmer(word).run();
}

}  // namespace tw
