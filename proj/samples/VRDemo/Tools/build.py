import sys


def collect(paths):
    found = []
    for p in paths:
        if p.endswith(".cs"):
            found.append(p)
        elif p.endswith(".c"):
            found.append(p)
        else:
            continue
    found.sort()
    print(len(found))
    return found


if __name__ == "__main__":
    collect(sys.argv[1:])
