from string import Template

from govdag._template import package_template


def load_template(name: str) -> Template:
    return package_template(__name__, name)
