#!/usr/bin/env python3
"""Regenerates the toy corpus: 10 task families x 5 constants = 50 problems,
four solutions each, for Java and Python: two independent implementations,
a copy of the first with one local renamed, and a copy of the first with a
comment line added. Python problems get an inputs.json sidecar and every
solution is run on it to confirm they agree."""

import json
import random
import re
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parent
CONSTANTS = [4, 6, 8, 10, 12]

# (python s1, python s2, java s1, java s2, rename for the third solution)
FAMILIES = [
    (
        """def solve(nums):
    total = 0
    for x in nums:
        total = total + x
    result = total * C
    return result
""",
        """def solve(nums):
    result = sum(nums)
    result = result * C
    return result
""",
        """public static int solve(int[] nums) {
    int total = 0;
    for (int x : nums) {
        total = total + x;
    }
    int result = total * C;
    return result;
}
""",
        """public static int solve(int[] nums) {
    int result = 0;
    for (int i = 0; i < nums.length; i++) {
        result += nums[i];
    }
    result = result * C;
    return result;
}
""",
        ("x", "v"),
    ),
    (
        """def solve(nums):
    count = 0
    limit = C
    for x in nums:
        if x > limit:
            count += 1
    return count
""",
        """def solve(nums):
    big = [x for x in nums if x > C]
    count = len(big)
    return count
""",
        """public static int solve(int[] nums) {
    int count = 0;
    int limit = C;
    for (int x : nums) {
        if (x > limit) {
            count++;
        }
    }
    return count;
}
""",
        """public static int solve(int[] nums) {
    int count = 0;
    int i = 0;
    while (i < nums.length) {
        if (nums[i] > C) {
            count = count + 1;
        }
        i = i + 1;
    }
    return count;
}
""",
        ("count", "cnt"),
    ),
    (
        """def solve(nums):
    best = nums[0]
    for x in nums:
        if x > best:
            best = x
    best = best + C
    return best
""",
        """def solve(nums):
    ordered = sorted(nums)
    top = ordered[-1]
    return top + C
""",
        """public static int solve(int[] nums) {
    int best = nums[0];
    for (int x : nums) {
        if (x > best) {
            best = x;
        }
    }
    best = best + C;
    return best;
}
""",
        """public static int solve(int[] nums) {
    int[] ordered = nums.clone();
    java.util.Arrays.sort(ordered);
    int top = ordered[ordered.length - 1];
    return top + C;
}
""",
        ("x", "y"),
    ),
    (
        """def solve(nums):
    acc = 0
    i = 0
    while i < len(nums):
        acc = acc + nums[i] * (i + C)
        i = i + 1
    return acc
""",
        """def solve(nums):
    acc = 0
    for i, x in enumerate(nums):
        acc += x * (i + C)
    return acc
""",
        """public static int solve(int[] nums) {
    int acc = 0;
    int i = 0;
    while (i < nums.length) {
        acc = acc + nums[i] * (i + C);
        i = i + 1;
    }
    return acc;
}
""",
        """public static int solve(int[] nums) {
    int acc = 0;
    for (int i = 0; i < nums.length; i++) {
        int w = i + C;
        acc += nums[i] * w;
    }
    return acc;
}
""",
        ("acc", "tot"),
    ),
    (
        """def solve(nums):
    parts = []
    for x in nums:
        r = x % C
        parts.append(str(r))
    text = ",".join(parts)
    return text
""",
        """def solve(nums):
    mods = [x % C for x in nums]
    text = ",".join(str(m) for m in mods)
    return text
""",
        """public static String solve(int[] nums) {
    StringBuilder parts = new StringBuilder();
    for (int x : nums) {
        int r = x % C;
        if (parts.length() > 0) {
            parts.append(",");
        }
        parts.append(r);
    }
    String text = parts.toString();
    return text;
}
""",
        """public static String solve(int[] nums) {
    String[] mods = new String[nums.length];
    for (int i = 0; i < nums.length; i++) {
        mods[i] = String.valueOf(nums[i] % C);
    }
    String text = String.join(",", mods);
    return text;
}
""",
        ("r", "rem"),
    ),
    (
        """def solve(nums):
    prod = 1
    for x in nums:
        prod = prod * (x + C)
        prod = prod % 97
    return prod
""",
        """def solve(nums):
    prod = 1
    for x in nums:
        prod = (prod * (x + C)) % 97
    return prod
""",
        """public static int solve(int[] nums) {
    int prod = 1;
    for (int x : nums) {
        prod = prod * (x + C);
        prod = prod % 97;
    }
    return prod;
}
""",
        """public static int solve(int[] nums) {
    int prod = 1;
    for (int i = 0; i < nums.length; i++) {
        prod = (prod * (nums[i] + C)) % 97;
    }
    return prod;
}
""",
        ("x", "item"),
    ),
    (
        """def solve(nums):
    out = []
    running = C
    for x in nums:
        running = running + x
        out.append(running)
    return out
""",
        """def solve(nums):
    out = []
    for k in range(len(nums)):
        out.append(C + sum(nums[:k + 1]))
    return out
""",
        """public static int[] solve(int[] nums) {
    int[] out = new int[nums.length];
    int running = C;
    for (int i = 0; i < nums.length; i++) {
        running = running + nums[i];
        out[i] = running;
    }
    return out;
}
""",
        """public static int[] solve(int[] nums) {
    int[] out = new int[nums.length];
    for (int k = 0; k < nums.length; k++) {
        int s = C;
        for (int j = 0; j <= k; j++) {
            s += nums[j];
        }
        out[k] = s;
    }
    return out;
}
""",
        ("running", "run"),
    ),
    (
        """def solve(nums):
    seen = set()
    order = []
    for x in nums:
        if x not in seen:
            order.append(x)
            seen.add(order[-1])
    size = len(order) * C
    return size
""",
        """def solve(nums):
    unique = list(dict.fromkeys(nums))
    size = len(unique) * C
    return size
""",
        """public static int solve(int[] nums) {
    java.util.Set<Integer> seen = new java.util.HashSet<>();
    int distinct = 0;
    for (int x : nums) {
        if (seen.add(x)) {
            distinct++;
        }
    }
    int size = distinct * C;
    return size;
}
""",
        """public static int solve(int[] nums) {
    int[] ordered = nums.clone();
    java.util.Arrays.sort(ordered);
    int distinct = 0;
    for (int i = 0; i < ordered.length; i++) {
        if (i == 0 || ordered[i] != ordered[i - 1]) {
            distinct++;
        }
    }
    return distinct * C;
}
""",
        ("seen", "visited"),
    ),
    (
        """def solve(nums):
    g = 0
    for x in nums:
        a = g
        b = abs(x)
        while b:
            a, b = b, a % b
        g = a
    return g + C
""",
        """def solve(nums):
    values = sorted(abs(x) for x in nums)
    g = 0
    for v in values:
        while v:
            g, v = v, g % v
    return g + C
""",
        """public static int solve(int[] nums) {
    int g = 0;
    for (int x : nums) {
        int a = g;
        int b = Math.abs(x);
        while (b != 0) {
            int t = a % b;
            a = b;
            b = t;
        }
        g = a;
    }
    return g + C;
}
""",
        """public static int solve(int[] nums) {
    int g = 0;
    for (int i = 0; i < nums.length; i++) {
        int v = Math.abs(nums[i]);
        while (v != 0) {
            int t = g % v;
            g = v;
            v = t;
        }
    }
    return g + C;
}
""",
        ("b", "q"),
    ),
    (
        """def solve(nums):
    pairs = 0
    n = len(nums)
    for i in range(n):
        for j in range(i + 1, n):
            if nums[i] + nums[j] == C:
                pairs += 1
    return pairs
""",
        """def solve(nums):
    counts = {}
    pairs = 0
    for x in nums:
        pairs += counts.get(C - x, 0)
        counts[x] = counts.get(x, 0) + 1
    return pairs
""",
        """public static int solve(int[] nums) {
    int pairs = 0;
    int n = nums.length;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (nums[i] + nums[j] == C) {
                pairs++;
            }
        }
    }
    return pairs;
}
""",
        """public static int solve(int[] nums) {
    java.util.Map<Integer, Integer> counts = new java.util.HashMap<>();
    int pairs = 0;
    for (int x : nums) {
        pairs += counts.getOrDefault(C - x, 0);
        counts.merge(x, 1, Integer::sum);
    }
    return pairs;
}
""",
        ("pairs", "hits"),
    ),
]


def instantiate(template: str, c: int) -> str:
    return re.sub(r"\bC\b", str(c), template)


def rename(source: str, old: str, new: str) -> str:
    return re.sub(rf"\b{re.escape(old)}\b", new, source)


def add_comment(source: str, marker: str) -> str:
    head, body = source.split("\n", 1)
    return f"{head}\n    {marker} same approach as before, resubmitted\n{body}"


def inputs_for(problem: int, c: int) -> list:
    rng = random.Random(1000 + problem)
    cases = []
    for _ in range(4):
        nums = [rng.randint(1, 30) for _ in range(rng.randint(4, 8))]
        # a repeated value, a half of C and a pair summing to C keep the
        # interesting branches of every family live
        nums += [nums[0], c // 2, c // 2, 1, c - 1]
        rng.shuffle(nums)
        cases.append([nums])
    return cases


def run(source: str, cases: list) -> list:
    env: dict = {}
    exec(source, env)
    fn = env["solve"]
    return [repr(fn(*json.loads(json.dumps(args)))) for args in cases]


def main() -> None:
    for lang in ("java", "python"):
        shutil.rmtree(ROOT / lang, ignore_errors=True)
    problem = 0
    for family in FAMILIES:
        py1, py2, java1, java2, (old, new) = family
        for c in CONSTANTS:
            problem += 1
            pid = f"p{problem:03d}"
            py = [instantiate(py1, c), instantiate(py2, c)]
            py.append(rename(py[0], old, new))
            py.append(add_comment(py[0], "#"))
            java = [instantiate(java1, c), instantiate(java2, c)]
            java.append(rename(java[0], old, new))
            java.append(add_comment(java[0], "//"))
            cases = inputs_for(problem, c)
            expected = run(py[0], cases)
            for k, src in enumerate(py):
                got = run(src, cases)
                assert got == expected, (pid, k, got, expected)
            for lang, sources, ext in (("python", py, "py"), ("java", java, "java")):
                d = ROOT / lang / pid
                d.mkdir(parents=True)
                for k, src in enumerate(sources, start=1):
                    (d / f"s{k}.{ext}").write_text(src)
            (ROOT / "python" / pid / "inputs.json").write_text(json.dumps(cases) + "\n")
    print(f"wrote {problem} problems")


if __name__ == "__main__":
    main()
