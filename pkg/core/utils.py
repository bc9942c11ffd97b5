from pathlib import Path


def write_document(text, output=None, stdout=None):
    """
    Write a rendered document to ``output`` (a path) or to the command's stdout.
    Returns the path written, if any.
    """
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
        return path
    stdout.write(text, ending='')
    return None
