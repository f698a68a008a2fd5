def reverse_words(text):
    words = text.split()
    words.reverse()
    return ' '.join(words)


def unrolled(x):
    acc = 0
    acc = acc + x * 0
    acc = acc + x * 1
    acc = acc + x * 2
    acc = acc + x * 3
    acc = acc + x * 4
    acc = acc + x * 5
    acc = acc + x * 6
    acc = acc + x * 7
    acc = acc + x * 8
    acc = acc + x * 9
    acc = acc + x * 10
    acc = acc + x * 11
    acc = acc + x * 12
    acc = acc + x * 13
    acc = acc + x * 14
    acc = acc + x * 15
    acc = acc + x * 16
    acc = acc + x * 17
    acc = acc + x * 18
    acc = acc + x * 19
    acc = acc + x * 20
    acc = acc + x * 21
    acc = acc + x * 22
    acc = acc + x * 23
    acc = acc + x * 24
    acc = acc + x * 25
    acc = acc + x * 26
    acc = acc + x * 27
    acc = acc + x * 28
    acc = acc + x * 29
    acc = acc + x * 30
    acc = acc + x * 31
    acc = acc + x * 32
    acc = acc + x * 33
    acc = acc + x * 34
    acc = acc + x * 35
    acc = acc + x * 36
    acc = acc + x * 37
    acc = acc + x * 38
    acc = acc + x * 39
    acc = acc + x * 40
    acc = acc + x * 41
    acc = acc + x * 42
    acc = acc + x * 43
    acc = acc + x * 44
    acc = acc + x * 45
    acc = acc + x * 46
    acc = acc + x * 47
    acc = acc + x * 48
    acc = acc + x * 49
    acc = acc + x * 50
    acc = acc + x * 51
    acc = acc + x * 52
    acc = acc + x * 53
    acc = acc + x * 54
    acc = acc + x * 55
    acc = acc + x * 56
    acc = acc + x * 57
    acc = acc + x * 58
    acc = acc + x * 59
    acc = acc + x * 60
    acc = acc + x * 61
    acc = acc + x * 62
    acc = acc + x * 63
    acc = acc + x * 64
    acc = acc + x * 65
    acc = acc + x * 66
    acc = acc + x * 67
    acc = acc + x * 68
    acc = acc + x * 69
    acc = acc + x * 70
    acc = acc + x * 71
    acc = acc + x * 72
    acc = acc + x * 73
    acc = acc + x * 74
    acc = acc + x * 75
    acc = acc + x * 76
    acc = acc + x * 77
    acc = acc + x * 78
    acc = acc + x * 79
    acc = acc + x * 80
    acc = acc + x * 81
    acc = acc + x * 82
    acc = acc + x * 83
    acc = acc + x * 84
    acc = acc + x * 85
    acc = acc + x * 86
    acc = acc + x * 87
    acc = acc + x * 88
    acc = acc + x * 89
    acc = acc + x * 90
    acc = acc + x * 91
    acc = acc + x * 92
    acc = acc + x * 93
    acc = acc + x * 94
    acc = acc + x * 95
    acc = acc + x * 96
    acc = acc + x * 97
    acc = acc + x * 98
    acc = acc + x * 99
    acc = acc + x * 100
    acc = acc + x * 101
    acc = acc + x * 102
    acc = acc + x * 103
    acc = acc + x * 104
    acc = acc + x * 105
    acc = acc + x * 106
    acc = acc + x * 107
    acc = acc + x * 108
    acc = acc + x * 109
    acc = acc + x * 110
    acc = acc + x * 111
    acc = acc + x * 112
    acc = acc + x * 113
    acc = acc + x * 114
    acc = acc + x * 115
    acc = acc + x * 116
    acc = acc + x * 117
    acc = acc + x * 118
    acc = acc + x * 119
    acc = acc + x * 120
    acc = acc + x * 121
    acc = acc + x * 122
    acc = acc + x * 123
    acc = acc + x * 124
    acc = acc + x * 125
    acc = acc + x * 126
    acc = acc + x * 127
    acc = acc + x * 128
    acc = acc + x * 129
    acc = acc + x * 130
    acc = acc + x * 131
    acc = acc + x * 132
    acc = acc + x * 133
    acc = acc + x * 134
    acc = acc + x * 135
    acc = acc + x * 136
    acc = acc + x * 137
    acc = acc + x * 138
    acc = acc + x * 139
    acc = acc + x * 140
    acc = acc + x * 141
    acc = acc + x * 142
    acc = acc + x * 143
    acc = acc + x * 144
    acc = acc + x * 145
    acc = acc + x * 146
    acc = acc + x * 147
    acc = acc + x * 148
    acc = acc + x * 149
    acc = acc + x * 150
    acc = acc + x * 151
    acc = acc + x * 152
    acc = acc + x * 153
    acc = acc + x * 154
    acc = acc + x * 155
    acc = acc + x * 156
    acc = acc + x * 157
    acc = acc + x * 158
    acc = acc + x * 159
    return acc
